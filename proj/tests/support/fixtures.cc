#include "support/fixtures.h"

#include <algorithm>

#include "seqmd/random.h"

namespace seqmd::testing {

FeatureLayout SmallLayout() {
  FeatureLayout l;
  l.input_dim = 8;
  l.country_idx = {0, 1};
  l.dependent_idx = {2, 3, 4};
  l.invariant_idx = {5, 6, 7};
  return l;
}

FeatureBatch RandomBatch(const FeatureLayout& layout, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  const auto d = static_cast<std::size_t>(layout.input_dim);
  Tensor x({n, d});
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t j = 0; j < d; ++j) x(r, j) = rng.Normal();
    const std::size_t hot = rng.UniformInt(layout.country_idx.size());
    for (std::size_t c = 0; c < layout.country_idx.size(); ++c) {
      x(r, static_cast<std::size_t>(layout.country_idx[c])) = c == hot ? 1.0 : 0.0;
    }
  }
  FeatureBatch batch = MakeBatch(x, layout);
  for (std::size_t r = 0; r < n; ++r) {
    const int depth = static_cast<int>(rng.UniformInt(4));
    for (int t = 0; t < 3; ++t) batch.labels(r, static_cast<std::size_t>(t)) = t < depth ? 1 : 0;
  }
  return batch;
}

ModelSpec SmallSpec(const std::string& model_name, int k, std::uint64_t seed) {
  ModelSpec s;
  ApplyModelName(model_name, s);
  s.tasks = DefaultTasks(k);
  s.seed = seed;
  s.layout = SmallLayout();
  s.seq.hidden = 4;
  s.seq.token_hidden = {};
  s.baseline.expert_widths = {4};
  s.baseline.bottom_widths = {4};
  s.baseline.tower_hidden = {4};
  s.md_config.mask_hidden = {3};
  s.md_config.transform_widths = {3};
  return s;
}

void Jitter(RankingModel& model, double scale, std::uint64_t seed) {
  Rng rng(seed);
  for (Parameter* p : model.params().All()) {
    for (double& v : p->value.data()) v += rng.Uniform(-scale, scale);
  }
}

GeneratorConfig SmallGenerator(std::uint64_t seed) {
  GeneratorConfig g;
  g.seed = seed;
  g.regions = 3;
  g.region_weights = {0.5, 0.3, 0.2};
  g.shift_strength = {0.0, 2.0, 1.0};
  g.domestic_preference = {1.0, -1.0, 0.5};
  g.domestic_share = {0.5, 0.3, 0.4};
  g.queries = 60;
  g.candidates = 5;
  return g;
}

FeatureLayout PlantedLayout(const GeneratorConfig& config) { return seqmd::PlantedLayout(config); }

}  // namespace seqmd::testing
