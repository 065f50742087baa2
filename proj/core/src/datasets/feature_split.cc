#include "seqmd/datasets/feature_split.h"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <set>

#include "seqmd/error.h"

namespace seqmd {

const char* DistanceMetricName(DistanceMetric m) {
  return m == DistanceMetric::kKolmogorovSmirnov ? "ks" : "wasserstein";
}

DistanceMetric ParseDistanceMetric(const std::string& name) {
  if (name == "ks") return DistanceMetric::kKolmogorovSmirnov;
  if (name == "wasserstein") return DistanceMetric::kWasserstein1;
  throw ConfigError("unknown distance metric: " + name + " (valid: ks, wasserstein)");
}

double KolmogorovSmirnov(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) return 0.0;
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double best = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    best = std::max(best, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return best;
}

double Wasserstein1(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) return 0.0;
  // Integral of |F_a - F_b| over the merged support.
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double prev = std::min(a[0], b[0]);
  double total = 0.0;
  while (i < a.size() || j < b.size()) {
    double x;
    if (j >= b.size() || (i < a.size() && a[i] <= b[j])) {
      x = a[i];
    } else {
      x = b[j];
    }
    total += std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb) * (x - prev);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    prev = x;
  }
  return total;
}

void to_json(Json& j, const FeatureSplit& s) {
  j = Json{{"feature_count", s.feature_count},
           {"country_idx", s.country_idx},
           {"dependent_idx", s.dependent_idx},
           {"invariant_idx", s.invariant_idx},
           {"threshold", s.threshold},
           {"metric", DistanceMetricName(s.metric)},
           {"mean_distance", s.mean_distance},
           {"excluded_regions", s.excluded_regions}};
}

void from_json(const Json& j, FeatureSplit& s) {
  RejectUnknownKeys(j,
                    {"feature_count", "country_idx", "dependent_idx", "invariant_idx",
                     "threshold", "metric", "mean_distance", "excluded_regions"},
                    "feature split");
  ReadOptional(j, "feature_count", s.feature_count);
  ReadOptional(j, "country_idx", s.country_idx);
  ReadOptional(j, "dependent_idx", s.dependent_idx);
  ReadOptional(j, "invariant_idx", s.invariant_idx);
  ReadOptional(j, "threshold", s.threshold);
  if (j.contains("metric")) s.metric = ParseDistanceMetric(j.at("metric").get<std::string>());
  ReadOptional(j, "mean_distance", s.mean_distance);
  ReadOptional(j, "excluded_regions", s.excluded_regions);
}

namespace {

template <typename ForEachRecord>
FeatureSplit SplitImpl(ForEachRecord for_each, std::size_t feature_count,
                       const std::vector<int>& country_idx, const SplitOptions& options) {
  const std::set<int> country(country_idx.begin(), country_idx.end());
  for (int c : country) {
    if (c < 0 || static_cast<std::size_t>(c) >= feature_count) {
      throw ConfigError("country feature index out of range: " + std::to_string(c));
    }
  }

  // samples[region][feature] -> values
  std::map<int, std::vector<std::vector<double>>> samples;
  for_each([&](const InteractionRecord& rec) {
    if (rec.feature_count() != feature_count) {
      throw FormatError("records disagree on feature dimension");
    }
    auto& per_feature = samples[rec.region];
    if (per_feature.empty()) per_feature.resize(feature_count);
    for (std::size_t f = 0; f < feature_count; ++f) per_feature[f].push_back(rec.feature(f));
  });

  FeatureSplit split;
  split.feature_count = static_cast<int>(feature_count);
  split.country_idx.assign(country.begin(), country.end());
  split.threshold = options.threshold;
  split.metric = options.metric;
  split.mean_distance.assign(feature_count, 0.0);

  std::vector<const std::vector<std::vector<double>>*> used;
  for (auto& [region, per_feature] : samples) {
    const std::size_t n = per_feature.empty() ? 0 : per_feature[0].size();
    if (n < options.min_region_samples) {
      std::cerr << "warning: region " << region << " has " << n << " samples (< "
                << options.min_region_samples << "); excluded from distance estimation\n";
      split.excluded_regions.push_back(region);
      continue;
    }
    for (auto& column : per_feature) std::sort(column.begin(), column.end());
    used.push_back(&per_feature);
  }
  if (used.size() < 2) {
    throw ConfigError("feature split needs at least two regions with >= " +
                      std::to_string(options.min_region_samples) + " samples");
  }

  for (std::size_t f = 0; f < feature_count; ++f) {
    if (country.count(static_cast<int>(f))) continue;
    double total = 0.0;
    std::size_t pairs = 0;
    for (std::size_t a = 0; a < used.size(); ++a) {
      for (std::size_t b = a + 1; b < used.size(); ++b) {
        const auto& xa = (*used[a])[f];
        const auto& xb = (*used[b])[f];
        total += options.metric == DistanceMetric::kKolmogorovSmirnov
                     ? KolmogorovSmirnov(xa, xb)
                     : Wasserstein1(xa, xb);
        ++pairs;
      }
    }
    const double mean = total / static_cast<double>(pairs);
    split.mean_distance[f] = mean;
    (mean > options.threshold ? split.dependent_idx : split.invariant_idx)
        .push_back(static_cast<int>(f));
  }
  return split;
}

}  // namespace

FeatureSplit SplitFeatures(std::span<const InteractionRecord> records,
                           const std::vector<int>& country_idx, const SplitOptions& options) {
  if (records.empty()) throw ConfigError("feature split needs records");
  return SplitImpl(
      [&](auto&& visit) {
        for (const auto& r : records) visit(r);
      },
      records.front().feature_count(), country_idx, options);
}

FeatureSplit SplitFeatures(std::span<const QueryGroup> groups,
                           const std::vector<int>& country_idx, const SplitOptions& options) {
  if (RecordCount(groups) == 0) throw ConfigError("feature split needs records");
  std::size_t d = 0;
  for (const auto& g : groups) {
    if (!g.records.empty()) {
      d = g.records.front().feature_count();
      break;
    }
  }
  return SplitImpl(
      [&](auto&& visit) {
        for (const auto& g : groups)
          for (const auto& r : g.records) visit(r);
      },
      d, country_idx, options);
}

void to_json(Json& j, const SplitOptions& o) {
  j = Json{{"threshold", o.threshold},
           {"metric", DistanceMetricName(o.metric)},
           {"min_region_samples", o.min_region_samples}};
}

void from_json(const Json& j, SplitOptions& o) {
  RejectUnknownKeys(j, {"threshold", "metric", "min_region_samples"}, "split options");
  ReadOptional(j, "threshold", o.threshold);
  std::string metric = DistanceMetricName(o.metric);
  ReadOptional(j, "metric", metric);
  o.metric = ParseDistanceMetric(metric);
  ReadOptional(j, "min_region_samples", o.min_region_samples);
  if (!(o.threshold >= 0.0) || !std::isfinite(o.threshold)) {
    throw ConfigError("split threshold must be a finite number >= 0");
  }
}

}  // namespace seqmd
