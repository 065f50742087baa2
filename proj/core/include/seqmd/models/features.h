#ifndef SEQMD_MODELS_FEATURES_H_
#define SEQMD_MODELS_FEATURES_H_

#include <span>
#include <vector>

#include "seqmd/datasets/feature_split.h"
#include "seqmd/datasets/generator.h"
#include "seqmd/datasets/record.h"
#include "seqmd/json_util.h"
#include "seqmd/tensorcore/tensor.h"

namespace seqmd {

// Column groups of the full feature vector that a model consumes.
struct FeatureLayout {
  int input_dim = 0;
  std::vector<int> country_idx;
  std::vector<int> dependent_idx;
  std::vector<int> invariant_idx;

  // Throws ConfigError unless the three sets partition [0, input_dim).
  void Validate() const;
  bool operator==(const FeatureLayout&) const = default;
};

FeatureLayout LayoutFromSplit(const FeatureSplit& split);
// Every non-country feature invariant; used when no split is available.
FeatureLayout LayoutWithoutSplit(int input_dim, const std::vector<int>& country_idx);
// Layout of a generator's feature vector using the features it shifts.
FeatureLayout PlantedLayout(const GeneratorConfig& config);

void to_json(Json& j, const FeatureLayout& l);
void from_json(const Json& j, FeatureLayout& l);

// Model inputs for a batch of records, pre-gathered per column group.
struct FeatureBatch {
  Tensor full;       // [n x input_dim]
  Tensor country;    // [n x |country|]
  Tensor dependent;  // [n x |dependent|]
  Tensor invariant;  // [n x |invariant|]
  Tensor labels;     // [n x 3]: click, add_to_cart, purchase

  std::size_t rows() const { return full.rows(); }
};

FeatureBatch MakeBatch(std::span<const InteractionRecord* const> records,
                       const FeatureLayout& layout);
FeatureBatch MakeBatch(std::span<const InteractionRecord> records,
                       const FeatureLayout& layout);

// Builds a batch directly from feature rows (labels zero). Used for
// probing models on arbitrary inputs.
FeatureBatch MakeBatch(const Tensor& features, const FeatureLayout& layout);

}  // namespace seqmd

#endif  // SEQMD_MODELS_FEATURES_H_
