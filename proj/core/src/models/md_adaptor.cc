#include "seqmd/models/md_adaptor.h"

#include "seqmd/error.h"
#include "seqmd/tensorcore/ops.h"

namespace seqmd {
namespace {

std::vector<int> MaskWidths(int country_dim, int dependent_dim, const MdConfig& c) {
  std::vector<int> w{country_dim};
  w.insert(w.end(), c.mask_hidden.begin(), c.mask_hidden.end());
  w.push_back(dependent_dim);
  return w;
}

std::vector<int> TransformWidths(int dependent_dim, const MdConfig& c) {
  std::vector<int> w{dependent_dim};
  w.insert(w.end(), c.transform_widths.begin(), c.transform_widths.end());
  return w;
}

}  // namespace

std::string MdAdaptor::MaskPrefix(std::optional<Task> task) {
  return task ? std::string("md.mask.") + TaskName(*task) : std::string("md.mask");
}

MdAdaptor::MdAdaptor(ParameterStore& store, int country_dim, int dependent_dim,
                     const MdConfig& config, const std::vector<Task>& mask_tasks)
    : country_dim_(country_dim),
      dependent_dim_(dependent_dim),
      per_task_(!mask_tasks.empty()),
      transform_(store, "md.transform", TransformWidths(dependent_dim, config),
                 config.transform_hidden_activation, config.transform_output_activation) {
  if (country_dim < 1 || dependent_dim < 1) {
    throw ConfigError("md adaptor needs at least one country and one dependent feature");
  }
  const auto widths = MaskWidths(country_dim, dependent_dim, config);
  if (per_task_) {
    for (Task t : mask_tasks) {
      masks_.emplace_back(store, MaskPrefix(t), widths, config.mask_hidden_activation,
                          config.mask_output_activation);
    }
  } else {
    masks_.emplace_back(store, MaskPrefix(std::nullopt), widths,
                        config.mask_hidden_activation, config.mask_output_activation);
  }
  for (auto& m : masks_) m.bias(m.layer_count() - 1).value.Fill(config.mask_bias_init);
}

Var MdAdaptor::Mask(Tape& tape, const Var& country, std::optional<std::size_t> task) const {
  if (per_task_ && !task) throw ConfigError("per-task md adaptor needs a task index");
  if (!per_task_ && task) {
    throw ConfigError("task index given to a single-mask (input_plug) md adaptor");
  }
  const std::size_t i = task.value_or(0);
  if (i >= masks_.size()) throw ConfigError("md task index out of range");
  return masks_[i].Forward(tape, country);
}

Var MdAdaptor::Transform(Tape& tape, const Var& country, const Var& dependent,
                         std::optional<std::size_t> task) const {
  if (dependent.cols() != static_cast<std::size_t>(dependent_dim_)) {
    throw DimensionError("md adaptor expects " + std::to_string(dependent_dim_) +
                         " dependent features, got " + std::to_string(dependent.cols()));
  }
  Var mask = Mask(tape, country, task);
  return transform_.Forward(tape, Mul(mask, dependent));
}

PluggedModel::PluggedModel(ModelSpec spec, std::unique_ptr<FlatInputModel> inner,
                           std::unique_ptr<MdAdaptor> adaptor)
    : RankingModel(std::move(spec), inner->shared_params()),
      inner_(std::move(inner)),
      adaptor_(std::move(adaptor)) {}

ModelOutput PluggedModel::Forward(Tape& tape, const FeatureBatch& batch) const {
  Var transformed = adaptor_->Transform(tape, tape.Constant(batch.country),
                                        tape.Constant(batch.dependent), std::nullopt);
  const Var parts[] = {tape.Constant(batch.invariant), transformed};
  return inner_->ForwardFlat(tape, ConcatCols(parts));
}

std::unique_ptr<RankingModel> PlugMd(std::unique_ptr<FlatInputModel> inner,
                                     const FeatureLayout& layout, const MdConfig& config) {
  const int expected = static_cast<int>(layout.invariant_idx.size()) + config.output_dim();
  if (inner->input_dim() != expected) {
    throw DimensionError("plugged model must accept |invariant| + d_t = " +
                         std::to_string(expected) + " inputs, got " +
                         std::to_string(inner->input_dim()));
  }
  auto adaptor = std::make_unique<MdAdaptor>(
      inner->params(), static_cast<int>(layout.country_idx.size()),
      static_cast<int>(layout.dependent_idx.size()), config);
  ModelSpec spec = inner->spec();
  spec.md = MdMode::kInputPlug;
  spec.layout = layout;
  return std::make_unique<PluggedModel>(std::move(spec), std::move(inner), std::move(adaptor));
}

}  // namespace seqmd
