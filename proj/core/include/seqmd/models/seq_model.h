#ifndef SEQMD_MODELS_SEQ_MODEL_H_
#define SEQMD_MODELS_SEQ_MODEL_H_

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "seqmd/models/md_adaptor.h"
#include "seqmd/models/model.h"

namespace seqmd {

// Tasks as a token sequence over a recurrent core.
//
//   tokens:  x, MLP_{task 1}(x), ..., MLP_{task k-1}(x)
//   stage 1: GRU stack over the tokens
//   md:      (in_sequence only) concat md.Transform(country, dep, task t)
//   stage 2: GRU stack (may be empty)
//   head:    shared linear hidden -> 1 per token
//
// With in_sequence MD the tokens are built from the invariant features;
// otherwise from the flat input.
class SeqModel : public FlatInputModel {
 public:
  SeqModel(ModelSpec spec, std::shared_ptr<ParameterStore> store, int input_dim);

  ModelOutput Forward(Tape& tape, const FeatureBatch& batch) const override;
  ModelOutput ForwardFlat(Tape& tape, const Var& x) const override;

  // Token 0 is x itself.
  std::vector<Var> Tokenize(Tape& tape, const Var& x) const;
  ModelOutput ForwardSequence(Tape& tape, const Var& x, const Var* country,
                              const Var* dependent) const;

  const MlpBlock& token_mlp(std::size_t t) const { return token_mlps_.at(t - 1); }
  const GruStack& stage1() const { return *stage1_; }
  const GruStack* stage2() const { return stage2_.get(); }
  const MlpBlock& head() const { return *head_; }
  const MdAdaptor* adaptor() const { return adaptor_.get(); }

  static std::string TokenPrefix(Task task);

 private:
  int token_dim_;
  std::vector<MlpBlock> token_mlps_;
  std::unique_ptr<GruStack> stage1_;
  std::unique_ptr<MdAdaptor> adaptor_;
  std::unique_ptr<GruStack> stage2_;
  std::unique_ptr<MlpBlock> head_;
};

}  // namespace seqmd

#endif  // SEQMD_MODELS_SEQ_MODEL_H_
