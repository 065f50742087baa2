#include "seqmd/models/factory.h"

#include "seqmd/error.h"
#include "seqmd/models/baselines.h"
#include "seqmd/models/md_adaptor.h"
#include "seqmd/models/seq_model.h"

namespace seqmd {

std::unique_ptr<FlatInputModel> BuildFlatModel(const ModelSpec& spec, int input_dim,
                                               std::shared_ptr<ParameterStore> store) {
  switch (spec.architecture) {
    case Architecture::kSharedBottom:
      return std::make_unique<SharedBottomModel>(spec, std::move(store), input_dim);
    case Architecture::kMlmmoe:
      return std::make_unique<MlmmoeModel>(spec, std::move(store), input_dim);
    case Architecture::kPle:
      return std::make_unique<PleModel>(spec, std::move(store), input_dim);
    case Architecture::kAdattSp:
      return std::make_unique<AdattSpModel>(spec, std::move(store), input_dim);
    case Architecture::kSeq:
      return std::make_unique<SeqModel>(spec, std::move(store), input_dim);
  }
  throw ConfigError("unknown architecture");
}

std::unique_ptr<RankingModel> BuildModel(const ModelSpec& spec) {
  spec.Validate();
  auto store = std::make_shared<ParameterStore>(spec.seed);
  if (spec.md == MdMode::kInputPlug) {
    ModelSpec inner = spec;
    inner.md = MdMode::kNone;
    const int dim =
        static_cast<int>(spec.layout.invariant_idx.size()) + spec.md_config.output_dim();
    return PlugMd(BuildFlatModel(inner, dim, store), spec.layout, spec.md_config);
  }
  return BuildFlatModel(spec, spec.layout.input_dim, store);
}

}  // namespace seqmd
