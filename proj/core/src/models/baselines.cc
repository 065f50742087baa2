#include "seqmd/models/baselines.h"

#include "seqmd/error.h"
#include "seqmd/tensorcore/ops.h"

namespace seqmd {
namespace {

std::vector<int> Widths(int in, const std::vector<int>& rest) {
  std::vector<int> w{in};
  w.insert(w.end(), rest.begin(), rest.end());
  return w;
}

MlpBlock MakeExpert(ParameterStore& store, const std::string& prefix, int in,
                    const BaselineConfig& c) {
  return MlpBlock(store, prefix, Widths(in, c.expert_widths), Activation::kRelu,
                  Activation::kRelu);
}

std::string LevelPrefix(const char* family, std::size_t l) {
  return std::string(family) + ".l" + std::to_string(l);
}

void CheckInput(const Var& x, int input_dim) {
  if (x.cols() != static_cast<std::size_t>(input_dim)) {
    throw DimensionError("model expects " + std::to_string(input_dim) + " input features, got " +
                         std::to_string(x.cols()));
  }
}

}  // namespace

TowerSet::TowerSet(ParameterStore& store, const std::vector<Task>& tasks, int input_dim,
                   const std::vector<int>& hidden) {
  std::vector<int> widths = Widths(input_dim, hidden);
  widths.push_back(1);
  for (Task t : tasks) {
    towers_.emplace_back(store, std::string("tower.") + TaskName(t), widths, Activation::kRelu,
                         Activation::kIdentity);
  }
}

ModelOutput TowerSet::Forward(Tape& tape, const std::vector<Var>& inputs) const {
  if (inputs.size() != 1 && inputs.size() != towers_.size()) {
    throw DimensionError("towers need one input or one per task");
  }
  std::vector<Var> logits;
  for (std::size_t t = 0; t < towers_.size(); ++t) {
    logits.push_back(towers_[t].Forward(tape, inputs[inputs.size() == 1 ? 0 : t]));
  }
  return MakeOutput(logits, false);
}

SharedBottomModel::SharedBottomModel(ModelSpec spec, std::shared_ptr<ParameterStore> store,
                                     int input_dim)
    : FlatInputModel(std::move(spec), std::move(store), input_dim),
      bottom_(*store_, "bottom", Widths(input_dim, spec_.baseline.bottom_widths),
              Activation::kRelu, Activation::kRelu),
      towers_(*store_, spec_.tasks, bottom_.output_dim(), spec_.baseline.tower_hidden) {}

ModelOutput SharedBottomModel::ForwardFlat(Tape& tape, const Var& x) const {
  CheckInput(x, input_dim());
  return towers_.Forward(tape, {bottom_.Forward(tape, x)});
}

MlmmoeModel::MlmmoeModel(ModelSpec spec, std::shared_ptr<ParameterStore> store, int input_dim)
    : FlatInputModel(std::move(spec), std::move(store), input_dim) {
  const BaselineConfig& c = spec_.baseline;
  const int expert_out = c.expert_widths.back();
  int in = input_dim;
  for (int l = 0; l < c.levels; ++l) {
    Level level;
    const std::string base = LevelPrefix("mlmmoe", l);
    for (int e = 0; e < c.shared_experts; ++e) {
      level.experts.push_back(MakeExpert(*store_, base + ".expert." + std::to_string(e), in, c));
    }
    if (l + 1 < c.levels) {
      level.shared_gate =
          std::make_unique<SoftmaxGate>(*store_, base + ".gate", in, c.shared_experts);
      levels_.push_back(std::move(level));
      in = expert_out;
    } else {
      levels_.push_back(std::move(level));
      for (Task t : spec_.tasks) {
        task_gates_.emplace_back(*store_, std::string("mlmmoe.gate.") + TaskName(t), in,
                                 c.shared_experts);
      }
    }
  }
  towers_ = std::make_unique<TowerSet>(*store_, spec_.tasks, expert_out, c.tower_hidden);
}

Var MlmmoeModel::LastLevelInput(Tape& tape, const Var& x) const {
  Var h = x;
  for (std::size_t l = 0; l + 1 < levels_.size(); ++l) {
    std::vector<Var> outs;
    for (const MlpBlock& e : levels_[l].experts) outs.push_back(e.Forward(tape, h));
    h = levels_[l].shared_gate->Mix(tape, h, outs);
  }
  return h;
}

std::vector<Var> MlmmoeModel::TopGateWeights(Tape& tape, const Var& x) const {
  CheckInput(x, input_dim());
  Var h = LastLevelInput(tape, x);
  std::vector<Var> w;
  for (const SoftmaxGate& g : task_gates_) w.push_back(g.Weights(tape, h));
  return w;
}

ModelOutput MlmmoeModel::ForwardFlat(Tape& tape, const Var& x) const {
  CheckInput(x, input_dim());
  Var h = LastLevelInput(tape, x);
  std::vector<Var> outs;
  for (const MlpBlock& e : levels_.back().experts) outs.push_back(e.Forward(tape, h));
  std::vector<Var> tower_in;
  for (const SoftmaxGate& g : task_gates_) tower_in.push_back(g.Mix(tape, h, outs));
  return towers_->Forward(tape, tower_in);
}

PleModel::PleModel(ModelSpec spec, std::shared_ptr<ParameterStore> store, int input_dim)
    : FlatInputModel(std::move(spec), std::move(store), input_dim) {
  const BaselineConfig& c = spec_.baseline;
  const std::size_t k = spec_.tasks.size();
  int in = input_dim;
  for (int l = 0; l < c.levels; ++l) {
    Level level;
    const std::string base = LevelPrefix("ple", l);
    level.task_experts.resize(k);
    for (std::size_t t = 0; t < k; ++t) {
      for (int e = 0; e < c.task_experts; ++e) {
        level.task_experts[t].push_back(MakeExpert(
            *store_, base + ".expert." + TaskName(spec_.tasks[t]) + "." + std::to_string(e), in,
            c));
      }
    }
    for (int e = 0; e < c.shared_experts; ++e) {
      level.shared_experts.push_back(
          MakeExpert(*store_, base + ".expert.shared." + std::to_string(e), in, c));
    }
    for (std::size_t t = 0; t < k; ++t) {
      level.task_gates.emplace_back(*store_, base + ".gate." + TaskName(spec_.tasks[t]), in,
                                    c.task_experts + c.shared_experts);
    }
    if (l + 1 < c.levels) {
      level.shared_gate = std::make_unique<SoftmaxGate>(
          *store_, base + ".gate.shared", in,
          static_cast<int>(k) * c.task_experts + c.shared_experts);
    }
    levels_.push_back(std::move(level));
    in = c.expert_widths.back();
  }
  towers_ = std::make_unique<TowerSet>(*store_, spec_.tasks, in, c.tower_hidden);
}

const MlpBlock& PleModel::expert(std::size_t level, const std::string& owner,
                                 std::size_t i) const {
  const Level& lv = levels_.at(level);
  if (owner == "shared") return lv.shared_experts.at(i);
  for (std::size_t t = 0; t < spec_.tasks.size(); ++t) {
    if (owner == TaskName(spec_.tasks[t])) return lv.task_experts[t].at(i);
  }
  throw ConfigError("no PLE expert owner named " + owner);
}

ModelOutput PleModel::ForwardFlat(Tape& tape, const Var& x) const {
  CheckInput(x, input_dim());
  const std::size_t k = spec_.tasks.size();
  std::vector<Var> task_in(k, x);
  Var shared_in = x;
  for (const Level& lv : levels_) {
    std::vector<std::vector<Var>> task_out(k);
    std::vector<Var> all_out;
    for (std::size_t t = 0; t < k; ++t) {
      for (const MlpBlock& e : lv.task_experts[t]) {
        task_out[t].push_back(e.Forward(tape, task_in[t]));
        all_out.push_back(task_out[t].back());
      }
    }
    std::vector<Var> shared_out;
    for (const MlpBlock& e : lv.shared_experts) {
      shared_out.push_back(e.Forward(tape, shared_in));
      all_out.push_back(shared_out.back());
    }
    std::vector<Var> next(k);
    for (std::size_t t = 0; t < k; ++t) {
      std::vector<Var> cand = task_out[t];
      cand.insert(cand.end(), shared_out.begin(), shared_out.end());
      next[t] = lv.task_gates[t].Mix(tape, task_in[t], cand);
    }
    if (lv.shared_gate) shared_in = lv.shared_gate->Mix(tape, shared_in, all_out);
    task_in = std::move(next);
  }
  return towers_->Forward(tape, task_in);
}

AdattSpModel::AdattSpModel(ModelSpec spec, std::shared_ptr<ParameterStore> store,
                           int input_dim)
    : FlatInputModel(std::move(spec), std::move(store), input_dim) {
  const BaselineConfig& c = spec_.baseline;
  const std::size_t k = spec_.tasks.size();
  int in = input_dim;
  for (int l = 0; l < c.levels; ++l) {
    Level level;
    const std::string base = LevelPrefix("adatt", l);
    level.experts.resize(k);
    for (std::size_t t = 0; t < k; ++t) {
      for (int e = 0; e < c.task_experts; ++e) {
        level.experts[t].push_back(MakeExpert(
            *store_, base + ".expert." + TaskName(spec_.tasks[t]) + "." + std::to_string(e), in,
            c));
      }
    }
    for (std::size_t t = 0; t < k; ++t) {
      level.gates.emplace_back(*store_, base + ".gate." + TaskName(spec_.tasks[t]), in,
                               static_cast<int>(k) * c.task_experts);
    }
    levels_.push_back(std::move(level));
    in = c.expert_widths.back();
  }
  towers_ = std::make_unique<TowerSet>(*store_, spec_.tasks, in, c.tower_hidden);
}

std::vector<Var> AdattSpModel::TowerInputs(Tape& tape, const Var& x) const {
  CheckInput(x, input_dim());
  const std::size_t k = spec_.tasks.size();
  std::vector<Var> task_in(k, x);
  for (const Level& lv : levels_) {
    std::vector<Var> all_out;
    for (std::size_t t = 0; t < k; ++t) {
      for (const MlpBlock& e : lv.experts[t]) all_out.push_back(e.Forward(tape, task_in[t]));
    }
    std::vector<Var> next(k);
    for (std::size_t t = 0; t < k; ++t) next[t] = lv.gates[t].Mix(tape, task_in[t], all_out);
    task_in = std::move(next);
  }
  return task_in;
}

ModelOutput AdattSpModel::ForwardFlat(Tape& tape, const Var& x) const {
  return towers_->Forward(tape, TowerInputs(tape, x));
}

}  // namespace seqmd
