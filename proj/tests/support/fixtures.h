#ifndef SEQMD_TESTS_SUPPORT_FIXTURES_H_
#define SEQMD_TESTS_SUPPORT_FIXTURES_H_

#include <cstdint>
#include <string>

#include "seqmd/datasets/generator.h"
#include "seqmd/models/features.h"
#include "seqmd/models/model.h"
#include "seqmd/models/model_spec.h"

namespace seqmd::testing {

// 8 features: country {0, 1}, dependent {2, 3, 4}, invariant {5, 6, 7}.
FeatureLayout SmallLayout();

// Random one-hot country block, normal features, random valid funnel labels.
FeatureBatch RandomBatch(const FeatureLayout& layout, std::size_t n, std::uint64_t seed);

// Spec with every width <= 8, for gradient checks and fast tests.
ModelSpec SmallSpec(const std::string& model_name, int k = 3, std::uint64_t seed = 0);

// Adds uniform(-scale, scale) noise to every parameter so no ReLU sits on
// its kink (zero biases feeding dead units otherwise do).
void Jitter(RankingModel& model, double scale, std::uint64_t seed);

// A few hundred records over 3 regions.
GeneratorConfig SmallGenerator(std::uint64_t seed = 0);

// Layout of a generator's full feature vector using its planted split.
FeatureLayout PlantedLayout(const GeneratorConfig& config);

}  // namespace seqmd::testing

#endif  // SEQMD_TESTS_SUPPORT_FIXTURES_H_
