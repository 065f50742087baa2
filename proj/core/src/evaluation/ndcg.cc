#include "seqmd/evaluation/ndcg.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "seqmd/error.h"

namespace seqmd {

const char* GainKindName(GainKind g) { return g == GainKind::kBinary ? "binary" : "graded"; }

GainKind ParseGainKind(const std::string& name) {
  if (name == "binary") return GainKind::kBinary;
  if (name == "graded") return GainKind::kGraded;
  throw ConfigError("unknown gain kind '" + name + "' (binary, graded)");
}

double Gain(const FunnelLabels& labels, Task task, GainKind kind) {
  if (kind == GainKind::kBinary) return labels.Get(task);
  if (labels.purchase) return 4.0;
  if (labels.cart) return 2.0;
  return labels.click ? 1.0 : 0.0;
}

std::vector<std::size_t> RankByScore(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

double Dcg(std::span<const double> gains, std::span<const std::size_t> order, int depth) {
  double dcg = 0.0;
  const std::size_t n = std::min(order.size(), static_cast<std::size_t>(depth));
  for (std::size_t i = 0; i < n; ++i) {
    dcg += gains[order[i]] / std::log2(static_cast<double>(i) + 2.0);
  }
  return dcg;
}

std::optional<double> NdcgFromGains(std::span<const double> gains,
                                    std::span<const double> scores, int depth) {
  if (gains.size() != scores.size()) {
    throw DimensionError("ndcg needs one score per candidate: " + std::to_string(scores.size()) +
                         " scores for " + std::to_string(gains.size()) + " candidates");
  }
  if (depth < 1) throw ConfigError("ndcg depth must be >= 1");
  const double idcg = Dcg(gains, RankByScore(gains), depth);
  if (idcg <= 0.0) return std::nullopt;
  return Dcg(gains, RankByScore(scores), depth) / idcg;
}

namespace {

std::vector<double> GroupGains(const QueryGroup& group, Task task, GainKind kind) {
  std::vector<double> gains;
  gains.reserve(group.size());
  for (const auto& r : group.records) gains.push_back(Gain(r.labels, task, kind));
  return gains;
}

}  // namespace

std::optional<double> NdcgForTask(const QueryGroup& group, std::span<const double> scores,
                                  Task task, int depth, GainKind kind) {
  return NdcgFromGains(GroupGains(group, task, kind), scores, depth);
}

std::optional<double> NdcgOracle(const QueryGroup& group, std::span<const double> scores,
                                 Task task, int depth, GainKind kind) {
  const std::size_t n = group.size();
  if (n > kOracleMaxGroup) {
    throw ConfigError("ndcg oracle handles at most " + std::to_string(kOracleMaxGroup) +
                      " candidates, got " + std::to_string(n));
  }
  if (scores.size() != n) throw DimensionError("ndcg oracle: score count mismatch");
  if (depth < 1) throw ConfigError("ndcg depth must be >= 1");
  const std::vector<double> gains = GroupGains(group, task, kind);

  auto dcg = [&](const std::vector<std::size_t>& order) {
    double s = 0.0;
    for (std::size_t i = 0; i < order.size() && i < static_cast<std::size_t>(depth); ++i) {
      s += gains[order[i]] / std::log2(static_cast<double>(i) + 2.0);
    }
    return s;
  };

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double idcg = 0.0;
  do {
    idcg = std::max(idcg, dcg(perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
  if (idcg <= 0.0) return std::nullopt;

  // Selection: the highest remaining score, earliest index on ties.
  std::vector<std::size_t> ranking;
  std::vector<bool> used(n, false);
  for (std::size_t pos = 0; pos < n; ++pos) {
    std::size_t best = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (!used[i] && (best == n || scores[i] > scores[best])) best = i;
    }
    used[best] = true;
    ranking.push_back(best);
  }
  return dcg(ranking) / idcg;
}

void NdcgStat::Add(const std::optional<double>& v) {
  if (v) {
    sum += *v;
    ++count;
  } else {
    ++excluded;
  }
}

}  // namespace seqmd
