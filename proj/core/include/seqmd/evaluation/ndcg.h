#ifndef SEQMD_EVALUATION_NDCG_H_
#define SEQMD_EVALUATION_NDCG_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seqmd/datasets/record.h"

namespace seqmd {

// binary: the task's own label. graded: 0/1/2/4 for none/click/cart/purchase,
// shared by every task.
enum class GainKind { kBinary, kGraded };

const char* GainKindName(GainKind g);
GainKind ParseGainKind(const std::string& name);

inline constexpr int kDefaultNdcgDepth = 48;

double Gain(const FunnelLabels& labels, Task task, GainKind kind);

// Candidate order by descending score; ties keep the original order.
std::vector<std::size_t> RankByScore(std::span<const double> scores);

// DCG of `gains` taken in `order`, truncated at `depth`:
//   sum_{i=1..depth} gain_i / log2(i + 1)
double Dcg(std::span<const double> gains, std::span<const std::size_t> order, int depth);

// NDCG of one group, or nullopt when the ideal DCG is 0 (no positives).
std::optional<double> NdcgFromGains(std::span<const double> gains,
                                    std::span<const double> scores, int depth);
std::optional<double> NdcgForTask(const QueryGroup& group, std::span<const double> scores,
                                  Task task, int depth = kDefaultNdcgDepth,
                                  GainKind kind = GainKind::kBinary);

inline constexpr std::size_t kOracleMaxGroup = 8;

// Reference implementation: the ranking is built by repeated selection and
// the ideal DCG is the maximum over every permutation. Groups larger than
// kOracleMaxGroup are rejected.
std::optional<double> NdcgOracle(const QueryGroup& group, std::span<const double> scores,
                                 Task task, int depth = kDefaultNdcgDepth,
                                 GainKind kind = GainKind::kBinary);

// Fixed-order mean over groups.
struct NdcgStat {
  double sum = 0.0;
  std::size_t count = 0;
  std::size_t excluded = 0;

  void Add(const std::optional<double>& v);
  double mean() const { return count ? sum / static_cast<double>(count) : 0.0; }
};

}  // namespace seqmd

#endif  // SEQMD_EVALUATION_NDCG_H_
