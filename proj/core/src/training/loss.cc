#include "seqmd/training/loss.h"

#include "seqmd/error.h"
#include "seqmd/tensorcore/ops.h"

namespace seqmd {

std::vector<double> ResolveTaskWeights(const std::vector<double>& weights, std::size_t k) {
  if (weights.empty()) return std::vector<double>(k, 1.0);
  if (weights.size() != k) {
    throw ConfigError("expected " + std::to_string(k) + " task weights, got " +
                      std::to_string(weights.size()));
  }
  bool positive = false;
  for (double w : weights) {
    if (!(w >= 0.0)) throw ConfigError("task weights must be >= 0");
    positive = positive || w > 0.0;
  }
  if (!positive) throw ConfigError("at least one task weight must be positive");
  return weights;
}

LossTerms MultitaskLoss(Tape& tape, const ModelOutput& out, const Tensor& labels,
                        const std::vector<Task>& tasks, std::span<const double> weights) {
  const std::size_t n = labels.rows();
  const std::size_t k = tasks.size();
  if (weights.size() != k) throw ConfigError("one loss weight per task needed");
  if (out.probs.rows() != n || out.probs.cols() != k) {
    throw DimensionError("model output does not match the label batch");
  }
  Tensor y({n, k});
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t t = 0; t < k; ++t) y(r, t) = labels(r, static_cast<std::size_t>(tasks[t]));
  }
  Var yv = tape.Constant(y);
  Var bce;  // [n x k] elementwise
  if (out.descending) {
    Var p = Clamp(out.probs, kProbClamp, 1.0 - kProbClamp);
    bce = Scale(Add(Mul(yv, Log(p)), Mul(OneMinus(yv), Log(OneMinus(p)))), -1.0);
  } else {
    bce = Sub(Softplus(out.logits), Mul(yv, out.logits));
  }
  // Column means, weighted: (1/n) * ones[1 x n] * bce * w[k x 1]
  Tensor w({k, 1});
  for (std::size_t t = 0; t < k; ++t) w(t, 0) = weights[t];
  LossTerms terms;
  terms.total = Scale(Sum(MatMul(bce, tape.Constant(w))), 1.0 / static_cast<double>(n));
  terms.per_task.assign(k, 0.0);
  const Tensor& b = bce.value();
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t t = 0; t < k; ++t) terms.per_task[t] += b(r, t);
  }
  for (double& v : terms.per_task) v /= static_cast<double>(n);
  return terms;
}

}  // namespace seqmd
