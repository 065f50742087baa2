#ifndef SEQMD_DATASETS_FEATURE_SPLIT_H_
#define SEQMD_DATASETS_FEATURE_SPLIT_H_

#include <span>
#include <string>
#include <vector>

#include "seqmd/datasets/record.h"
#include "seqmd/json_util.h"

namespace seqmd {

enum class DistanceMetric { kKolmogorovSmirnov, kWasserstein1 };

const char* DistanceMetricName(DistanceMetric m);
DistanceMetric ParseDistanceMetric(const std::string& name);

// Two-sample statistics over sorted samples.
double KolmogorovSmirnov(std::span<const double> a_sorted, std::span<const double> b_sorted);
double Wasserstein1(std::span<const double> a_sorted, std::span<const double> b_sorted);

// Three-way partition of the feature index range [0, feature_count).
struct FeatureSplit {
  int feature_count = 0;
  std::vector<int> country_idx;
  std::vector<int> dependent_idx;
  std::vector<int> invariant_idx;
  double threshold = 0.1;
  DistanceMetric metric = DistanceMetric::kKolmogorovSmirnov;
  // Mean pairwise cross-region distance per feature; 0 for country features.
  std::vector<double> mean_distance;
  // Regions dropped from the estimate for having too few samples.
  std::vector<int> excluded_regions;
};

void to_json(Json& j, const FeatureSplit& s);
void from_json(const Json& j, FeatureSplit& s);

struct SplitOptions {
  double threshold = 0.1;
  DistanceMetric metric = DistanceMetric::kKolmogorovSmirnov;
  std::size_t min_region_samples = 30;
};

void to_json(Json& j, const SplitOptions& o);
void from_json(const Json& j, SplitOptions& o);

// A non-country feature is dependent iff the distance between its empirical
// distributions, averaged over all region pairs, exceeds the threshold.
// Throws ConfigError when fewer than two regions remain after exclusion.
FeatureSplit SplitFeatures(std::span<const InteractionRecord> records,
                           const std::vector<int>& country_idx,
                           const SplitOptions& options = {});
FeatureSplit SplitFeatures(std::span<const QueryGroup> groups,
                           const std::vector<int>& country_idx,
                           const SplitOptions& options = {});

}  // namespace seqmd

#endif  // SEQMD_DATASETS_FEATURE_SPLIT_H_
