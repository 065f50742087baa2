#ifndef SEQMD_MODELS_MODEL_H_
#define SEQMD_MODELS_MODEL_H_

#include <cstdint>
#include <memory>
#include <vector>

#include "seqmd/models/features.h"
#include "seqmd/models/model_spec.h"
#include "seqmd/tensorcore/parameter.h"
#include "seqmd/tensorcore/tape.h"

namespace seqmd {

struct ModelOutput {
  Var logits;  // [batch x k], pre-regularizer
  Var probs;   // [batch x k]
  // True when probs are cumulative sigmoid products (losses must then be
  // computed from clamped probabilities rather than logits).
  bool descending = false;
};

// Per-record view of a model output.
struct TaskScores {
  std::vector<double> probs;
  std::vector<double> logits;
};

// A multi-task ranking network. Parameters live in a ParameterStore that
// may be shared with wrapping models.
class RankingModel {
 public:
  RankingModel(ModelSpec spec, std::shared_ptr<ParameterStore> store);
  virtual ~RankingModel() = default;

  RankingModel(const RankingModel&) = delete;
  RankingModel& operator=(const RankingModel&) = delete;

  virtual ModelOutput Forward(Tape& tape, const FeatureBatch& batch) const = 0;

  const ModelSpec& spec() const { return spec_; }
  const std::vector<Task>& tasks() const { return spec_.tasks; }
  std::size_t task_count() const { return spec_.tasks.size(); }
  // Column of `task` in the output, or -1.
  int TaskColumn(Task task) const;

  ParameterStore& params() { return *store_; }
  const ParameterStore& params() const { return *store_; }
  const std::shared_ptr<ParameterStore>& shared_params() const { return store_; }

  // Seeds of every model this one was derived from, oldest first.
  const std::vector<std::uint64_t>& seed_lineage() const { return seed_lineage_; }
  void set_seed_lineage(std::vector<std::uint64_t> lineage) {
    seed_lineage_ = std::move(lineage);
  }

 protected:
  ModelSpec spec_;
  std::shared_ptr<ParameterStore> store_;
  std::vector<std::uint64_t> seed_lineage_;
};

// A model that consumes one flat feature vector per record; the target of
// input-level MD plugging.
class FlatInputModel : public RankingModel {
 public:
  FlatInputModel(ModelSpec spec, std::shared_ptr<ParameterStore> store, int input_dim)
      : RankingModel(std::move(spec), std::move(store)), input_dim_(input_dim) {}

  ModelOutput Forward(Tape& tape, const FeatureBatch& batch) const override;
  virtual ModelOutput ForwardFlat(Tape& tape, const Var& x) const = 0;

  int input_dim() const { return input_dim_; }

 private:
  int input_dim_;
};

// Stacks per-task logit columns and applies sigmoid, or the cumulative
// sigmoid product when `descending`.
ModelOutput MakeOutput(const std::vector<Var>& task_logits, bool descending);

// Forward without keeping the graph; one TaskScores per row.
std::vector<TaskScores> Predict(const RankingModel& model, const FeatureBatch& batch);
// Probabilities only, [n x k].
Tensor PredictProbs(const RankingModel& model, const FeatureBatch& batch);

}  // namespace seqmd

#endif  // SEQMD_MODELS_MODEL_H_
