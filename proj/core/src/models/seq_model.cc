#include "seqmd/models/seq_model.h"

#include "seqmd/error.h"
#include "seqmd/tensorcore/ops.h"

namespace seqmd {

std::string SeqModel::TokenPrefix(Task task) {
  return std::string("seq.token.") + TaskName(task);
}

SeqModel::SeqModel(ModelSpec spec, std::shared_ptr<ParameterStore> store, int input_dim)
    : FlatInputModel(std::move(spec), std::move(store), input_dim) {
  const bool in_seq = spec_.md == MdMode::kInSequence;
  token_dim_ = in_seq ? static_cast<int>(spec_.layout.invariant_idx.size()) : input_dim;
  if (token_dim_ < 1) throw ConfigError("seq tokens need at least one input feature");
  ParameterStore& ps = *store_;

  std::vector<int> token_widths{token_dim_};
  token_widths.insert(token_widths.end(), spec_.seq.token_hidden.begin(),
                      spec_.seq.token_hidden.end());
  token_widths.push_back(token_dim_);
  for (std::size_t t = 1; t < spec_.tasks.size(); ++t) {
    token_mlps_.emplace_back(ps, TokenPrefix(spec_.tasks[t]), token_widths,
                             spec_.seq.token_hidden_activation, Activation::kIdentity);
  }

  const int h = spec_.seq.hidden;
  stage1_ = std::make_unique<GruStack>(ps, "seq.stage1", token_dim_, h, spec_.seq.stage1_layers);
  int stage2_in = h;
  if (in_seq) {
    adaptor_ = std::make_unique<MdAdaptor>(
        ps, static_cast<int>(spec_.layout.country_idx.size()),
        static_cast<int>(spec_.layout.dependent_idx.size()), spec_.md_config, spec_.tasks);
    stage2_in += adaptor_->output_dim();
  }
  int head_in = stage2_in;
  if (spec_.seq.stage2_layers > 0) {
    stage2_ = std::make_unique<GruStack>(ps, "seq.stage2", stage2_in, h, spec_.seq.stage2_layers);
    head_in = h;
  }
  head_ = std::make_unique<MlpBlock>(ps, "seq.head", std::vector<int>{head_in, 1},
                                     Activation::kIdentity, Activation::kIdentity);
}

std::vector<Var> SeqModel::Tokenize(Tape& tape, const Var& x) const {
  if (x.cols() != static_cast<std::size_t>(token_dim_)) {
    throw DimensionError("seq tokens expect width " + std::to_string(token_dim_) + ", got " +
                         std::to_string(x.cols()));
  }
  std::vector<Var> tokens{x};
  for (const MlpBlock& mlp : token_mlps_) {
    Var t = mlp.Forward(tape, x);
    if (t.cols() != x.cols()) throw DimensionError("token mlp must map d to d");
    tokens.push_back(t);
  }
  return tokens;
}

ModelOutput SeqModel::ForwardSequence(Tape& tape, const Var& x, const Var* country,
                                      const Var* dependent) const {
  if (adaptor_ && (!country || !dependent)) {
    throw ConfigError("in_sequence md needs country and dependent features");
  }
  std::vector<Var> states = stage1_->Run(tape, Tokenize(tape, x));
  if (adaptor_) {
    for (std::size_t t = 0; t < states.size(); ++t) {
      const Var parts[] = {states[t], adaptor_->Transform(tape, *country, *dependent, t)};
      states[t] = ConcatCols(parts);
    }
  }
  if (stage2_) states = stage2_->Run(tape, states);
  std::vector<Var> logits;
  logits.reserve(states.size());
  for (const Var& s : states) logits.push_back(head_->Forward(tape, s));
  return MakeOutput(logits, spec_.seq.regularizer);
}

ModelOutput SeqModel::ForwardFlat(Tape& tape, const Var& x) const {
  return ForwardSequence(tape, x, nullptr, nullptr);
}

ModelOutput SeqModel::Forward(Tape& tape, const FeatureBatch& batch) const {
  if (!adaptor_) return ForwardFlat(tape, tape.Constant(batch.full));
  Var country = tape.Constant(batch.country);
  Var dependent = tape.Constant(batch.dependent);
  return ForwardSequence(tape, tape.Constant(batch.invariant), &country, &dependent);
}

}  // namespace seqmd
