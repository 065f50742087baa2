#include "seqmd/models/model.h"

#include "seqmd/error.h"
#include "seqmd/tensorcore/ops.h"

namespace seqmd {

RankingModel::RankingModel(ModelSpec spec, std::shared_ptr<ParameterStore> store)
    : spec_(std::move(spec)), store_(std::move(store)), seed_lineage_{spec_.seed} {}

int RankingModel::TaskColumn(Task task) const {
  for (std::size_t i = 0; i < spec_.tasks.size(); ++i) {
    if (spec_.tasks[i] == task) return static_cast<int>(i);
  }
  return -1;
}

ModelOutput FlatInputModel::Forward(Tape& tape, const FeatureBatch& batch) const {
  return ForwardFlat(tape, tape.Constant(batch.full));
}

ModelOutput MakeOutput(const std::vector<Var>& task_logits, bool descending) {
  ModelOutput out;
  out.logits = ConcatCols(task_logits);
  Var sig = Sigmoid(out.logits);
  out.probs = descending ? CumProdCols(sig) : sig;
  out.descending = descending;
  return out;
}

std::vector<TaskScores> Predict(const RankingModel& model, const FeatureBatch& batch) {
  Tape tape;
  ModelOutput out = model.Forward(tape, batch);
  const Tensor& p = out.probs.value();
  const Tensor& l = out.logits.value();
  std::vector<TaskScores> scores(batch.rows());
  for (std::size_t r = 0; r < batch.rows(); ++r) {
    scores[r].probs.assign(p.Row(r).begin(), p.Row(r).end());
    scores[r].logits.assign(l.Row(r).begin(), l.Row(r).end());
  }
  return scores;
}

Tensor PredictProbs(const RankingModel& model, const FeatureBatch& batch) {
  Tape tape;
  return model.Forward(tape, batch).probs.value();
}

}  // namespace seqmd
