#ifndef SEQMD_TENSORCORE_GRAD_CHECK_H_
#define SEQMD_TENSORCORE_GRAD_CHECK_H_

#include <functional>
#include <string>
#include <vector>

#include "seqmd/tensorcore/parameter.h"
#include "seqmd/tensorcore/tape.h"

namespace seqmd {

struct GradCheckEntry {
  std::string param;
  std::size_t index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  double rel_err = 0.0;
};

struct GradCheckReport {
  // Sorted by rel_err, largest first.
  std::vector<GradCheckEntry> entries;
  double max_rel_err = 0.0;
  std::string worst_param;
  std::size_t worst_index = 0;
  double tolerance = 0.0;

  bool passed() const { return max_rel_err < tolerance; }
  // Entries above tolerance.
  std::vector<GradCheckEntry> Failures() const;
};

struct GradCheckOptions {
  double tolerance = 1e-4;
  double step = 1e-5;
};

// Builds the scalar loss on the given tape. Must be deterministic.
using LossFn = std::function<Var(Tape&)>;

// Compares reverse-mode gradients with central differences for every scalar
// of every parameter:
//   rel_err = |g_ad - g_fd| / max(1, |g_ad|, |g_fd|)
// Parameter values are restored afterwards; gradients hold g_ad.
GradCheckReport CheckGradients(const LossFn& loss_fn,
                               const std::vector<Parameter*>& params,
                               const GradCheckOptions& options = {});

}  // namespace seqmd

#endif  // SEQMD_TENSORCORE_GRAD_CHECK_H_
