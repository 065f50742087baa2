#ifndef SEQMD_MODELS_FACTORY_H_
#define SEQMD_MODELS_FACTORY_H_

#include <memory>

#include "seqmd/models/model.h"

namespace seqmd {

// Builds a freshly initialized model. Parameters are seeded from spec.seed.
std::unique_ptr<RankingModel> BuildModel(const ModelSpec& spec);

// The architecture without any MD wrapping, taking `input_dim` flat inputs.
std::unique_ptr<FlatInputModel> BuildFlatModel(const ModelSpec& spec, int input_dim,
                                               std::shared_ptr<ParameterStore> store);

}  // namespace seqmd

#endif  // SEQMD_MODELS_FACTORY_H_
