#ifndef SEQMD_DATASETS_GENERATOR_H_
#define SEQMD_DATASETS_GENERATOR_H_

#include <cstdint>
#include <vector>

#include "seqmd/datasets/record.h"
#include "seqmd/json_util.h"

namespace seqmd {

// Synthetic multi-region funnel data.
//
// Feature layout of one record:
//   x_user    = [user/query features (user_features) | region one-hot (regions)]
//   x_listing = [domestic indicator | listing features (listing_features - 1)]
// Shifted features are observed as scale[r] * z + offset[r] of a latent
// standard normal z; labels are driven by z with region-specific weights,
// so the observed shift hides a consistent signal.
struct GeneratorConfig {
  std::uint64_t seed = 0;
  int regions = 4;
  std::vector<double> region_weights = {0.4, 0.3, 0.2, 0.1};
  int user_features = 4;
  int listing_features = 8;
  int queries = 2500;
  int candidates = 20;
  // Per-region shift magnitude; 0 leaves a region on the reference distribution.
  std::vector<double> shift_strength = {0.0, 1.0, 2.0, 1.5};
  // Indices into the user block / listing block (listing index 0 is the
  // domestic indicator and cannot be shifted).
  std::vector<int> shifted_user_features = {};
  std::vector<int> shifted_listing_features = {1, 2, 3, 4};
  double p_click = 0.3;
  double p_cart_given_click = 0.4;
  double p_purchase_given_cart = 0.5;
  // Added to the purchase logit of domestic listings, per buyer region.
  std::vector<double> domestic_preference = {1.5, -1.0, 0.5, 0.0};
  // Probability that a candidate is sold from the buyer's region.
  std::vector<double> domestic_share = {0.6, 0.3, 0.4, 0.2};
  // Scales every feature-driven logit term; 0 makes labels depend only on
  // the funnel base rates and the domestic preference.
  double signal_strength = 1.0;
  double app_share = 0.5;

  int user_dim() const { return user_features + regions; }   // m
  int listing_dim() const { return listing_features; }       // p
  int feature_dim() const { return user_dim() + listing_dim(); }

  // Throws ConfigError describing the first invalid field.
  void Validate() const;
};

void to_json(Json& j, const GeneratorConfig& c);
void from_json(const Json& j, GeneratorConfig& c);

// Deterministic in `config`; group q draws from a stream derived from
// (seed, q), so any subset of groups can be generated independently.
std::vector<QueryGroup> Generate(const GeneratorConfig& config);
QueryGroup GenerateGroup(const GeneratorConfig& config, int query_index);
// Groups [first, first + count) of the same world; indices past
// `config.queries` give a held-out set disjoint from Generate(config).
std::vector<QueryGroup> GenerateRange(const GeneratorConfig& config, int first, int count);

// Indices of the region one-hot inside the full feature vector.
std::vector<int> CountryFeatureIndices(int user_features, int regions);
std::vector<int> CountryFeatureIndices(const GeneratorConfig& config);

// Full-vector indices whose distribution the generator shifts across regions:
// shifted features when any region has non-zero strength, plus the domestic
// indicator when domestic shares differ between regions.
std::vector<int> PlantedDependentFeatures(const GeneratorConfig& config);

}  // namespace seqmd

#endif  // SEQMD_DATASETS_GENERATOR_H_
