#ifndef SEQMD_TRAINING_OPTIMIZER_H_
#define SEQMD_TRAINING_OPTIMIZER_H_

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "seqmd/json_util.h"
#include "seqmd/tensorcore/parameter.h"

namespace seqmd {

enum class OptimizerKind { kSgd, kAdam };

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::kAdam;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void Validate() const;
};

void to_json(Json& j, const OptimizerConfig& c);
void from_json(const Json& j, OptimizerConfig& c);

class Optimizer {
 public:
  virtual ~Optimizer() = default;
  // Applies one update from the accumulated gradients.
  virtual void Step(const std::vector<Parameter*>& params) = 0;
};

class Sgd : public Optimizer {
 public:
  explicit Sgd(double lr) : lr_(lr) {}
  void Step(const std::vector<Parameter*>& params) override;

 private:
  double lr_;
};

class Adam : public Optimizer {
 public:
  Adam(double lr, double beta1, double beta2, double epsilon)
      : lr_(lr), beta1_(beta1), beta2_(beta2), epsilon_(epsilon) {}
  void Step(const std::vector<Parameter*>& params) override;

 private:
  struct Moments {
    std::vector<double> m, v;
  };
  double lr_, beta1_, beta2_, epsilon_;
  long step_ = 0;
  std::unordered_map<const Parameter*, Moments> state_;
};

std::unique_ptr<Optimizer> MakeOptimizer(const OptimizerConfig& config);

}  // namespace seqmd

#endif  // SEQMD_TRAINING_OPTIMIZER_H_
