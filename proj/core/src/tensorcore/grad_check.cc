#include "seqmd/tensorcore/grad_check.h"

#include <algorithm>
#include <cmath>

#include "seqmd/error.h"

namespace seqmd {
namespace {

double EvaluateLoss(const LossFn& loss_fn) {
  Tape tape;
  Var loss = loss_fn(tape);
  if (loss.value().size() != 1) throw DimensionError("grad check: loss is not scalar");
  const double v = loss.value()[0];
  if (!std::isfinite(v)) throw NonFiniteError("loss", "grad check forward");
  return v;
}

}  // namespace

std::vector<GradCheckEntry> GradCheckReport::Failures() const {
  std::vector<GradCheckEntry> out;
  for (const auto& e : entries) {
    if (e.rel_err >= tolerance) out.push_back(e);
  }
  return out;
}

GradCheckReport CheckGradients(const LossFn& loss_fn,
                               const std::vector<Parameter*>& params,
                               const GradCheckOptions& options) {
  for (Parameter* p : params) p->ZeroGrad();
  {
    Tape tape;
    Var loss = loss_fn(tape);
    if (!std::isfinite(loss.value()[0])) throw NonFiniteError("loss", "grad check forward");
    tape.Backward(loss);
  }

  GradCheckReport report;
  report.tolerance = options.tolerance;
  for (Parameter* p : params) {
    for (std::size_t i = 0; i < p->size(); ++i) {
      const double saved = p->value[i];
      p->value[i] = saved + options.step;
      const double up = EvaluateLoss(loss_fn);
      p->value[i] = saved - options.step;
      const double down = EvaluateLoss(loss_fn);
      p->value[i] = saved;

      GradCheckEntry e;
      e.param = p->name;
      e.index = i;
      e.analytic = p->grad[i];
      e.numeric = (up - down) / (2.0 * options.step);
      const double scale = std::max({1.0, std::abs(e.analytic), std::abs(e.numeric)});
      e.rel_err = std::abs(e.analytic - e.numeric) / scale;
      report.entries.push_back(std::move(e));
    }
  }
  std::stable_sort(report.entries.begin(), report.entries.end(),
                   [](const GradCheckEntry& a, const GradCheckEntry& b) {
                     return a.rel_err > b.rel_err;
                   });
  if (!report.entries.empty()) {
    report.max_rel_err = report.entries.front().rel_err;
    report.worst_param = report.entries.front().param;
    report.worst_index = report.entries.front().index;
  }
  return report;
}

}  // namespace seqmd
