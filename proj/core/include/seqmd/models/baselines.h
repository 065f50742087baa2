#ifndef SEQMD_MODELS_BASELINES_H_
#define SEQMD_MODELS_BASELINES_H_

#include <memory>
#include <string>
#include <vector>

#include "seqmd/models/model.h"

namespace seqmd {

// Per-task towers [in, tower_hidden..., 1] named "tower.<task>".
class TowerSet {
 public:
  TowerSet(ParameterStore& store, const std::vector<Task>& tasks, int input_dim,
           const std::vector<int>& hidden);

  // One input per task (or a single input shared by all towers).
  ModelOutput Forward(Tape& tape, const std::vector<Var>& inputs) const;

  const MlpBlock& tower(std::size_t t) const { return towers_[t]; }

 private:
  std::vector<MlpBlock> towers_;
};

// Bottom MLP shared by all tasks, then towers.
class SharedBottomModel : public FlatInputModel {
 public:
  SharedBottomModel(ModelSpec spec, std::shared_ptr<ParameterStore> store, int input_dim);
  ModelOutput ForwardFlat(Tape& tape, const Var& x) const override;

  const MlpBlock& bottom() const { return bottom_; }
  const TowerSet& towers() const { return towers_; }

 private:
  MlpBlock bottom_;
  TowerSet towers_;
};

// Multi-level mixture of experts: every expert and every between-level gate
// is shared; only the top gates are task-specific.
class MlmmoeModel : public FlatInputModel {
 public:
  MlmmoeModel(ModelSpec spec, std::shared_ptr<ParameterStore> store, int input_dim);
  ModelOutput ForwardFlat(Tape& tape, const Var& x) const override;

  // Mixture weights of the gates at the last level, one per task.
  std::vector<Var> TopGateWeights(Tape& tape, const Var& x) const;

 private:
  struct Level {
    std::vector<MlpBlock> experts;
    std::unique_ptr<SoftmaxGate> shared_gate;  // absent on the last level
  };
  std::vector<Level> levels_;
  std::vector<SoftmaxGate> task_gates_;
  std::unique_ptr<TowerSet> towers_;
  // Input of the last level.
  Var LastLevelInput(Tape& tape, const Var& x) const;
};

// Progressive layered extraction: per level, task-specific and shared
// experts; each task gate mixes its own and the shared experts, a shared
// gate (not on the last level) mixes all of them.
class PleModel : public FlatInputModel {
 public:
  PleModel(ModelSpec spec, std::shared_ptr<ParameterStore> store, int input_dim);
  ModelOutput ForwardFlat(Tape& tape, const Var& x) const override;

  // Experts are addressed as (level, "shared"|task name, index).
  const MlpBlock& expert(std::size_t level, const std::string& owner, std::size_t i) const;

 private:
  struct Level {
    std::vector<std::vector<MlpBlock>> task_experts;  // [task][i]
    std::vector<MlpBlock> shared_experts;
    std::vector<SoftmaxGate> task_gates;
    std::unique_ptr<SoftmaxGate> shared_gate;
  };
  std::vector<Level> levels_;
  std::unique_ptr<TowerSet> towers_;
};

// AdaTT with shared-parameter fusion only: experts are all task-specific and
// each task gate mixes the experts of every task.
class AdattSpModel : public FlatInputModel {
 public:
  AdattSpModel(ModelSpec spec, std::shared_ptr<ParameterStore> store, int input_dim);
  ModelOutput ForwardFlat(Tape& tape, const Var& x) const override;

  // Tower inputs (gate-mixed expert outputs of the last level).
  std::vector<Var> TowerInputs(Tape& tape, const Var& x) const;
  const MlpBlock& expert(std::size_t level, std::size_t task, std::size_t i) const {
    return levels_[level].experts[task][i];
  }
  const SoftmaxGate& gate(std::size_t level, std::size_t task) const {
    return levels_[level].gates[task];
  }
  const TowerSet& towers() const { return *towers_; }

 private:
  struct Level {
    std::vector<std::vector<MlpBlock>> experts;  // [task][i]
    std::vector<SoftmaxGate> gates;
  };
  std::vector<Level> levels_;
  std::unique_ptr<TowerSet> towers_;
};

}  // namespace seqmd

#endif  // SEQMD_MODELS_BASELINES_H_
