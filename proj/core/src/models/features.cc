#include "seqmd/models/features.h"

#include <algorithm>

#include "seqmd/error.h"

namespace seqmd {

void FeatureLayout::Validate() const {
  std::vector<int> seen(static_cast<std::size_t>(std::max(0, input_dim)), 0);
  for (const auto* group : {&country_idx, &dependent_idx, &invariant_idx}) {
    for (int i : *group) {
      if (i < 0 || i >= input_dim) {
        throw ConfigError("feature index " + std::to_string(i) + " outside [0, " +
                          std::to_string(input_dim) + ")");
      }
      if (seen[i]++) throw ConfigError("feature index " + std::to_string(i) + " assigned twice");
    }
  }
  for (int i = 0; i < input_dim; ++i) {
    if (!seen[i]) throw ConfigError("feature index " + std::to_string(i) + " unassigned");
  }
}

FeatureLayout LayoutFromSplit(const FeatureSplit& split) {
  FeatureLayout l{split.feature_count, split.country_idx, split.dependent_idx,
                  split.invariant_idx};
  l.Validate();
  return l;
}

FeatureLayout LayoutWithoutSplit(int input_dim, const std::vector<int>& country_idx) {
  FeatureLayout l;
  l.input_dim = input_dim;
  l.country_idx = country_idx;
  for (int i = 0; i < input_dim; ++i) {
    if (std::find(country_idx.begin(), country_idx.end(), i) == country_idx.end()) {
      l.invariant_idx.push_back(i);
    }
  }
  l.Validate();
  return l;
}

void to_json(Json& j, const FeatureLayout& l) {
  j = Json{{"input_dim", l.input_dim},
           {"country_idx", l.country_idx},
           {"dependent_idx", l.dependent_idx},
           {"invariant_idx", l.invariant_idx}};
}

void from_json(const Json& j, FeatureLayout& l) {
  RejectUnknownKeys(j, {"input_dim", "country_idx", "dependent_idx", "invariant_idx"},
                    "feature layout");
  ReadOptional(j, "input_dim", l.input_dim);
  ReadOptional(j, "country_idx", l.country_idx);
  ReadOptional(j, "dependent_idx", l.dependent_idx);
  ReadOptional(j, "invariant_idx", l.invariant_idx);
}

namespace {

void Gather(const Tensor& full, const std::vector<int>& idx, Tensor& out) {
  const std::size_t n = full.rows();
  out = Tensor({n, idx.size()});
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < idx.size(); ++c) out(r, c) = full(r, idx[c]);
}

void FillGroups(FeatureBatch& b, const FeatureLayout& layout) {
  Gather(b.full, layout.country_idx, b.country);
  Gather(b.full, layout.dependent_idx, b.dependent);
  Gather(b.full, layout.invariant_idx, b.invariant);
}

}  // namespace

FeatureBatch MakeBatch(std::span<const InteractionRecord* const> records,
                       const FeatureLayout& layout) {
  const std::size_t n = records.size();
  const auto d = static_cast<std::size_t>(layout.input_dim);
  FeatureBatch b;
  b.full = Tensor({n, d});
  b.labels = Tensor({n, 3});
  for (std::size_t r = 0; r < n; ++r) {
    const InteractionRecord& rec = *records[r];
    if (rec.feature_count() != d) {
      throw DimensionError("record has " + std::to_string(rec.feature_count()) +
                           " features, layout expects " + std::to_string(d));
    }
    std::copy(rec.x_user.begin(), rec.x_user.end(), b.full.raw() + r * d);
    std::copy(rec.x_listing.begin(), rec.x_listing.end(),
              b.full.raw() + r * d + rec.x_user.size());
    b.labels(r, 0) = rec.labels.click;
    b.labels(r, 1) = rec.labels.cart;
    b.labels(r, 2) = rec.labels.purchase;
  }
  FillGroups(b, layout);
  return b;
}

FeatureBatch MakeBatch(std::span<const InteractionRecord> records,
                       const FeatureLayout& layout) {
  std::vector<const InteractionRecord*> ptrs;
  ptrs.reserve(records.size());
  for (const auto& r : records) ptrs.push_back(&r);
  return MakeBatch(std::span<const InteractionRecord* const>(ptrs), layout);
}

FeatureBatch MakeBatch(const Tensor& features, const FeatureLayout& layout) {
  if (features.cols() != static_cast<std::size_t>(layout.input_dim)) {
    throw DimensionError("feature rows have " + std::to_string(features.cols()) +
                         " columns, layout expects " + std::to_string(layout.input_dim));
  }
  FeatureBatch b;
  b.full = features;
  b.labels = Tensor({features.rows(), 3});
  FillGroups(b, layout);
  return b;
}

FeatureLayout PlantedLayout(const GeneratorConfig& config) {
  const std::vector<int> country = CountryFeatureIndices(config);
  const std::vector<int> dependent = PlantedDependentFeatures(config);
  FeatureLayout l;
  l.input_dim = config.feature_dim();
  l.country_idx = country;
  l.dependent_idx = dependent;
  for (int j = 0; j < l.input_dim; ++j) {
    if (std::find(country.begin(), country.end(), j) == country.end() &&
        std::find(dependent.begin(), dependent.end(), j) == dependent.end()) {
      l.invariant_idx.push_back(j);
    }
  }
  return l;
}

}  // namespace seqmd
