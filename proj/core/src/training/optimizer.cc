#include "seqmd/training/optimizer.h"

#include <cmath>

#include "seqmd/error.h"

namespace seqmd {

void OptimizerConfig::Validate() const {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning rate must be finite and >= 0");
  }
  if (kind == OptimizerKind::kAdam) {
    if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
      throw ConfigError("adam betas must lie in [0, 1)");
    }
    if (!(epsilon > 0.0)) throw ConfigError("adam epsilon must be positive");
  }
}

void to_json(Json& j, const OptimizerConfig& c) {
  j = Json{{"kind", c.kind == OptimizerKind::kAdam ? "adam" : "sgd"},
           {"learning_rate", c.learning_rate},
           {"beta1", c.beta1},
           {"beta2", c.beta2},
           {"epsilon", c.epsilon}};
}

void from_json(const Json& j, OptimizerConfig& c) {
  RejectUnknownKeys(j, {"kind", "learning_rate", "beta1", "beta2", "epsilon"}, "optimizer");
  std::string kind = c.kind == OptimizerKind::kAdam ? "adam" : "sgd";
  ReadOptional(j, "kind", kind);
  if (kind == "adam") {
    c.kind = OptimizerKind::kAdam;
  } else if (kind == "sgd") {
    c.kind = OptimizerKind::kSgd;
  } else {
    throw ConfigError("unknown optimizer '" + kind + "' (sgd, adam)");
  }
  ReadOptional(j, "learning_rate", c.learning_rate);
  ReadOptional(j, "beta1", c.beta1);
  ReadOptional(j, "beta2", c.beta2);
  ReadOptional(j, "epsilon", c.epsilon);
}

void Sgd::Step(const std::vector<Parameter*>& params) {
  for (Parameter* p : params) {
    for (std::size_t i = 0; i < p->size(); ++i) p->value[i] -= lr_ * p->grad[i];
  }
}

void Adam::Step(const std::vector<Parameter*>& params) {
  ++step_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(step_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(step_));
  for (Parameter* p : params) {
    Moments& s = state_[p];
    if (s.m.empty()) {
      s.m.assign(p->size(), 0.0);
      s.v.assign(p->size(), 0.0);
    }
    for (std::size_t i = 0; i < p->size(); ++i) {
      const double g = p->grad[i];
      s.m[i] = beta1_ * s.m[i] + (1.0 - beta1_) * g;
      s.v[i] = beta2_ * s.v[i] + (1.0 - beta2_) * g * g;
      p->value[i] -= lr_ * (s.m[i] / c1) / (std::sqrt(s.v[i] / c2) + epsilon_);
    }
  }
}

std::unique_ptr<Optimizer> MakeOptimizer(const OptimizerConfig& config) {
  config.Validate();
  if (config.kind == OptimizerKind::kSgd) return std::make_unique<Sgd>(config.learning_rate);
  return std::make_unique<Adam>(config.learning_rate, config.beta1, config.beta2,
                                config.epsilon);
}

}  // namespace seqmd
