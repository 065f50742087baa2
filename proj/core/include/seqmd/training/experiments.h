#ifndef SEQMD_TRAINING_EXPERIMENTS_H_
#define SEQMD_TRAINING_EXPERIMENTS_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "seqmd/datasets/feature_split.h"
#include "seqmd/datasets/generator.h"
#include "seqmd/evaluation/report.h"
#include "seqmd/models/model_spec.h"
#include "seqmd/training/trainer.h"

namespace seqmd {

enum class ExperimentKind {
  kRegularizerAblation,
  kTransfer2to3,
  kSingleVsAllRegion,
  kMdPlugPlay,
  kCompare,  // arbitrary arm list; used by the directional benchmark
};

const char* ExperimentName(ExperimentKind k);
ExperimentKind ParseExperiment(const std::string& name);
std::vector<std::string> ExperimentNames();

struct ExperimentConfig {
  GeneratorConfig data;  // data.seed is replaced by each run seed
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};
  TrainConfig train;     // train.seed is replaced by each run seed
  ModelSpec model;       // widths; architecture, md and tasks are set per arm
  int tasks = 3;
  // Extra query groups generated after the training data and used for
  // scoring; 0 scores the validation split instead.
  int test_queries = 0;
  SplitOptions split;
  EvalOptions eval;
  // Model names for kCompare.
  std::vector<std::string> arms = {"shared_bottom", "seq", "seq+md"};
  int threads = 1;
};

void to_json(Json& j, const ExperimentConfig& c);
void from_json(const Json& j, ExperimentConfig& c);

// One value per arm x seed x metric x region. `metric` is a task name
// (NDCG of that task) or "domestic_share".
struct ExperimentRow {
  std::string arm;
  std::uint64_t seed = 0;
  std::string metric;
  std::string region;  // "all" or a region id
  double value = 0.0;
  std::optional<double> delta;  // % (NDCG) or pp (domestic share) vs shared_bottom
  std::size_t groups = 0;
  bool operator==(const ExperimentRow&) const = default;
};

struct SummaryRow {
  std::string arm;
  std::string metric;
  std::string region;
  std::size_t runs = 0;
  double mean = 0.0;
  double stdev = 0.0;
  std::optional<double> delta_mean;
  std::optional<double> delta_stdev;
};

struct ExperimentResult {
  std::string experiment;
  std::vector<std::string> arms;  // in report order
  std::vector<ExperimentRow> rows;
  std::vector<SummaryRow> summary;
  std::vector<TrainReport> train_reports;

  const SummaryRow* Find(const std::string& arm, const std::string& metric,
                         const std::string& region = kAll) const;
};

// Data for one run seed: generated groups, the hash split and the feature
// layout derived from the training part.
struct PreparedData {
  std::vector<QueryGroup> train;
  std::vector<QueryGroup> val;
  std::vector<QueryGroup> test;
  FeatureSplit split;
  FeatureLayout layout;

  // Groups the arms are scored on.
  const std::vector<QueryGroup>& eval() const { return test.empty() ? val : test; }
};
PreparedData PrepareData(const ExperimentConfig& config, std::uint64_t seed);

ExperimentResult RunExperiment(ExperimentKind kind, const ExperimentConfig& config);

// Mean and sample standard deviation per (arm, metric, region), in first
// appearance order.
std::vector<SummaryRow> Summarize(const std::vector<ExperimentRow>& rows);

void WriteExperimentCsv(const ExperimentResult& r, std::ostream& out);
void WriteSummaryCsv(const ExperimentResult& r, std::ostream& out);
std::string FormatExperimentReport(const ExperimentResult& r, const ExperimentConfig& config);

// Runs fn(0..n-1) on up to `threads` threads; results are stored by index.
void ParallelFor(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace seqmd

#endif  // SEQMD_TRAINING_EXPERIMENTS_H_
