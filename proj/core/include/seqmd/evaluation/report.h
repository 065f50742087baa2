#ifndef SEQMD_EVALUATION_REPORT_H_
#define SEQMD_EVALUATION_REPORT_H_

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seqmd/evaluation/ndcg.h"
#include "seqmd/models/model.h"

namespace seqmd {

inline constexpr char kBaselineModel[] = "shared_bottom";
inline constexpr char kAll[] = "all";

struct EvalOptions {
  int depth = kDefaultNdcgDepth;
  GainKind gain = GainKind::kBinary;
  std::size_t top_n = 10;  // domestic share cut-off
};

void to_json(Json& j, const EvalOptions& o);
void from_json(const Json& j, EvalOptions& o);

struct NamedModel {
  std::string name;
  const RankingModel* model;
};

struct NdcgCell {
  std::string model;
  std::string task;
  std::string platform;  // "all", "web", "app"
  std::string region;    // "all" or the region id
  double ndcg = 0.0;
  std::size_t groups = 0;
  std::size_t excluded = 0;
  std::optional<double> delta_pct;  // vs the baseline cell; absent if undefined
};

struct NdcgReport {
  EvalOptions options;
  std::vector<std::string> models;
  std::vector<NdcgCell> cells;

  const NdcgCell* Find(const std::string& model, const std::string& task,
                       const std::string& platform = kAll,
                       const std::string& region = kAll) const;
};

struct DomesticCell {
  std::string model;
  std::string region;  // "all" or the buyer region id
  double share = 0.0;
  std::size_t shown = 0;
  std::optional<double> delta_pp;  // percentage points vs baseline
};

struct DomesticShareReport {
  std::size_t top_n = 10;
  std::vector<DomesticCell> cells;

  const DomesticCell* Find(const std::string& model, const std::string& region = kAll) const;
};

struct EvaluationReport {
  NdcgReport ndcg;
  DomesticShareReport domestic;
};

// `models` must contain one named "shared_bottom"; it is the 0% reference.
EvaluationReport EvaluateModels(const std::vector<NamedModel>& models,
                                std::span<const QueryGroup> groups,
                                const EvalOptions& options = {});

// Same, from precomputed per-group probability matrices (one vector per
// model, columns in the model's task order).
EvaluationReport EvaluateScores(const std::vector<std::string>& names,
                                const std::vector<std::vector<Task>>& tasks,
                                const std::vector<std::vector<Tensor>>& scores,
                                std::span<const QueryGroup> groups,
                                const EvalOptions& options = {});

// Fraction of the top-N (by `column`) candidates sold from the buyer's region.
double DomesticShare(std::span<const QueryGroup> groups, const std::vector<Tensor>& scores,
                     std::size_t column, std::size_t top_n, std::size_t* shown = nullptr);

// Fixed-precision decimal; "nan" never appears, undefined values print as "".
std::string FormatFixed(double v, int digits);

// First row is the header; the first column is left-aligned, the rest
// right-aligned.
std::string AlignedTable(const std::vector<std::vector<std::string>>& rows);

void WriteNdcgCsv(const NdcgReport& report, std::ostream& out);
void WriteDomesticCsv(const DomesticShareReport& report, std::ostream& out);
// Rows = models, columns = task x platform; deltas vs shared_bottom, plus
// absolute NDCG, per-region deltas and the domestic share table.
std::string FormatReportTables(const EvaluationReport& report, const std::string& title);
// Notes on the NDCG variant and the validation split.
std::string ReportFooter(const EvalOptions& options);

}  // namespace seqmd

#endif  // SEQMD_EVALUATION_REPORT_H_
