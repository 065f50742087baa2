#ifndef SEQMD_TRAINING_LOSS_H_
#define SEQMD_TRAINING_LOSS_H_

#include <span>
#include <vector>

#include "seqmd/models/model.h"

namespace seqmd {

inline constexpr double kProbClamp = 1e-7;

struct LossTerms {
  Var total;                    // sum_t w_t * mean BCE_t
  std::vector<double> per_task;  // unweighted mean BCE per task
};

// `labels` is [n x 3] in funnel order; the model's tasks pick the columns.
// BCE is taken from logits when `out.descending` is false and from
// probabilities clamped to [1e-7, 1 - 1e-7] otherwise.
LossTerms MultitaskLoss(Tape& tape, const ModelOutput& out, const Tensor& labels,
                        const std::vector<Task>& tasks, std::span<const double> weights);

// Uniform weights when `weights` is empty; throws ConfigError when the
// size is wrong, any weight is negative, or none is positive.
std::vector<double> ResolveTaskWeights(const std::vector<double>& weights, std::size_t k);

}  // namespace seqmd

#endif  // SEQMD_TRAINING_LOSS_H_
