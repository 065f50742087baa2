#ifndef SEQMD_TRAINING_TRAINER_H_
#define SEQMD_TRAINING_TRAINER_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seqmd/datasets/record.h"
#include "seqmd/error.h"
#include "seqmd/evaluation/ndcg.h"
#include "seqmd/json_util.h"
#include "seqmd/models/model.h"
#include "seqmd/training/optimizer.h"

namespace seqmd {

// A training step produced a non-finite value.
class DivergenceError : public Error {
 public:
  DivergenceError(int epoch, std::size_t batch, const std::string& detail)
      : Error("training diverged at epoch " + std::to_string(epoch) + ", batch " +
              std::to_string(batch) + ": " + detail),
        epoch_(epoch),
        batch_(batch) {}
  int epoch() const { return epoch_; }
  std::size_t batch() const { return batch_; }

 private:
  int epoch_;
  std::size_t batch_;
};

struct TrainConfig {
  std::uint64_t seed = 0;
  int epochs = 10;
  int batch_size = 256;
  OptimizerConfig optimizer;
  // One per model task; empty means uniform.
  std::vector<double> task_weights;
  // Epochs without a validation purchase-NDCG improvement before stopping;
  // 0 disables early stopping.
  int patience = 3;
  // Train (and validate) on this buyer region only.
  std::optional<int> region;
  double val_fraction = 0.1;
  int eval_depth = kDefaultNdcgDepth;

  void Validate() const;
};

void to_json(Json& j, const TrainConfig& c);
void from_json(const Json& j, TrainConfig& c);

struct EpochStats {
  int epoch = 0;
  std::vector<double> train_loss;  // per task, mean over batches
  std::vector<double> val_loss;    // per task, over the validation set
  double val_ndcg = 0.0;           // purchase (or deepest task) NDCG
  bool operator==(const EpochStats&) const = default;
};

struct TrainReport {
  std::string model;
  std::vector<std::string> tasks;
  std::vector<EpochStats> epochs;
  int best_epoch = -1;
  double best_val_ndcg = 0.0;
  bool stopped_early = false;
  std::size_t train_groups = 0;
  std::size_t val_groups = 0;
  std::size_t train_records = 0;
  std::size_t param_count = 0;
  std::string checkpoint_path;
  double wall_clock_seconds = 0.0;  // not part of equality or the JSON form

  bool operator==(const TrainReport& o) const;
};

void to_json(Json& j, const TrainReport& r);

// Deterministic split by a hash of query_id: a group is held out when
// hash(query_id) mod 10000 < fraction * 10000.
struct GroupSplit {
  std::vector<QueryGroup> train;
  std::vector<QueryGroup> val;
};
bool IsValidationGroup(const std::string& query_id, double fraction);
GroupSplit SplitByQueryHash(std::span<const QueryGroup> groups, double fraction);

// Trains `model` in place on `train_groups`, validating on `val_groups`
// after every epoch. The parameters of the best validation epoch are
// restored at the end. Neither group list is modified.
TrainReport Train(RankingModel& model, std::span<const QueryGroup> train_groups,
                  std::span<const QueryGroup> val_groups, const TrainConfig& config);

// Splits `groups` by query hash first.
TrainReport Train(RankingModel& model, std::span<const QueryGroup> groups,
                  const TrainConfig& config);

// Per-task mean loss of `model` on `groups`.
std::vector<double> EvaluateLoss(const RankingModel& model, std::span<const QueryGroup> groups,
                                 std::span<const double> weights);

}  // namespace seqmd

#endif  // SEQMD_TRAINING_TRAINER_H_
