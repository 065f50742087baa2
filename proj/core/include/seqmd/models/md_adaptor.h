#ifndef SEQMD_MODELS_MD_ADAPTOR_H_
#define SEQMD_MODELS_MD_ADAPTOR_H_

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "seqmd/models/model.h"
#include "seqmd/tensorcore/layers.h"

namespace seqmd {

// Multi-distribution adaptor. Country features produce a mask with one
// weight per dependent feature; the masked dependent features pass through
// a transform MLP:
//   out = transform(mask(country) * dependent)
// With `mask_tasks` empty there is a single mask ("md.mask"); otherwise one
// mask MLP per task ("md.mask.<task>") and a shared transform.
class MdAdaptor {
 public:
  MdAdaptor(ParameterStore& store, int country_dim, int dependent_dim,
            const MdConfig& config, const std::vector<Task>& mask_tasks = {});

  Var Mask(Tape& tape, const Var& country, std::optional<std::size_t> task) const;
  Var Transform(Tape& tape, const Var& country, const Var& dependent,
                std::optional<std::size_t> task) const;

  bool per_task() const { return per_task_; }
  int country_dim() const { return country_dim_; }
  int dependent_dim() const { return dependent_dim_; }
  int output_dim() const { return transform_.output_dim(); }
  std::size_t mask_count() const { return masks_.size(); }
  const MlpBlock& mask_mlp(std::size_t i) const { return masks_[i]; }
  const MlpBlock& transform_mlp() const { return transform_; }

  static std::string MaskPrefix(std::optional<Task> task);

 private:
  int country_dim_;
  int dependent_dim_;
  bool per_task_;
  std::vector<MlpBlock> masks_;
  MlpBlock transform_;
};

// Input-level placement: the wrapped model sees
//   concat(invariant, md.Transform(country, dependent))
// and is otherwise untouched.
class PluggedModel : public RankingModel {
 public:
  PluggedModel(ModelSpec spec, std::unique_ptr<FlatInputModel> inner,
               std::unique_ptr<MdAdaptor> adaptor);

  ModelOutput Forward(Tape& tape, const FeatureBatch& batch) const override;

  const FlatInputModel& inner() const { return *inner_; }
  const MdAdaptor& adaptor() const { return *adaptor_; }

 private:
  std::unique_ptr<FlatInputModel> inner_;
  std::unique_ptr<MdAdaptor> adaptor_;
};

// Wraps `inner` with a single-mask adaptor registered in the inner model's
// parameter store. `inner` must accept |invariant| + d_t inputs.
std::unique_ptr<RankingModel> PlugMd(std::unique_ptr<FlatInputModel> inner,
                                     const FeatureLayout& layout, const MdConfig& config);

}  // namespace seqmd

#endif  // SEQMD_MODELS_MD_ADAPTOR_H_
