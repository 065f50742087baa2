#ifndef SEQMD_MODELS_MODEL_SPEC_H_
#define SEQMD_MODELS_MODEL_SPEC_H_

#include <cstdint>
#include <string>
#include <vector>

#include "seqmd/datasets/record.h"
#include "seqmd/json_util.h"
#include "seqmd/models/features.h"
#include "seqmd/tensorcore/layers.h"

namespace seqmd {

enum class Architecture { kSharedBottom, kMlmmoe, kPle, kAdattSp, kSeq };

// Where the multi-distribution adaptor sits.
enum class MdMode {
  kNone,
  kInputPlug,   // before the model, on the flat input
  kInSequence,  // SEQ only: per-task masks feeding the second GRU stage
};

const char* ArchitectureName(Architecture a);
Architecture ParseArchitecture(const std::string& name);
const char* MdModeName(MdMode m);
MdMode ParseMdMode(const std::string& name);

struct MdConfig {
  // Mask MLP: country -> mask_hidden... -> |dependent|.
  std::vector<int> mask_hidden = {16};
  Activation mask_hidden_activation = Activation::kTanh;
  Activation mask_output_activation = Activation::kIdentity;
  // Initial value of the mask's output bias; 1 starts every mask near
  // pass-through.
  double mask_bias_init = 1.0;
  // Transform MLP: |dependent| -> transform_widths...; the last width is d_t.
  std::vector<int> transform_widths = {16};
  Activation transform_hidden_activation = Activation::kRelu;
  Activation transform_output_activation = Activation::kIdentity;

  int output_dim() const { return transform_widths.back(); }
};

struct SeqConfig {
  // Token MLP widths are [d, token_hidden..., d].
  std::vector<int> token_hidden = {};
  Activation token_hidden_activation = Activation::kRelu;
  int hidden = 32;
  int stage1_layers = 1;
  int stage2_layers = 1;
  // Descending probability regularizer: p_m = prod_{i <= m} sigmoid(l_i).
  bool regularizer = true;
};

struct BaselineConfig {
  int levels = 2;
  // Shared experts per level (MLMMoE, PLE).
  int shared_experts = 2;
  // Task-specific experts per task per level (PLE, AdaTT-sp).
  int task_experts = 1;
  std::vector<int> expert_widths = {32};
  std::vector<int> bottom_widths = {32};
  std::vector<int> tower_hidden = {64, 32};
};

struct ModelSpec {
  Architecture architecture = Architecture::kSeq;
  std::vector<Task> tasks = DefaultTasks(3);
  MdMode md = MdMode::kNone;
  std::uint64_t seed = 0;
  FeatureLayout layout;
  SeqConfig seq;
  BaselineConfig baseline;
  MdConfig md_config;

  // Throws ConfigError on inconsistent combinations.
  void Validate() const;
};

// "seq", "seq+md" (in-sequence), "seq+md_plug", "ple", "ple+md", ...
std::string ModelName(const ModelSpec& spec);
// Sets architecture and md mode from a name accepted by ModelName.
void ApplyModelName(const std::string& name, ModelSpec& spec);
std::vector<std::string> ValidModelNames();

void to_json(Json& j, const MdConfig& c);
void from_json(const Json& j, MdConfig& c);
void to_json(Json& j, const SeqConfig& c);
void from_json(const Json& j, SeqConfig& c);
void to_json(Json& j, const BaselineConfig& c);
void from_json(const Json& j, BaselineConfig& c);
void to_json(Json& j, const ModelSpec& s);
void from_json(const Json& j, ModelSpec& s);

}  // namespace seqmd

#endif  // SEQMD_MODELS_MODEL_SPEC_H_
