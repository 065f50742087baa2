#include "seqmd/models/model_spec.h"

#include "seqmd/error.h"

namespace seqmd {

const char* ArchitectureName(Architecture a) {
  switch (a) {
    case Architecture::kSharedBottom: return "shared_bottom";
    case Architecture::kMlmmoe: return "mlmmoe";
    case Architecture::kPle: return "ple";
    case Architecture::kAdattSp: return "adatt_sp";
    case Architecture::kSeq: return "seq";
  }
  return "seq";
}

Architecture ParseArchitecture(const std::string& name) {
  for (Architecture a : {Architecture::kSharedBottom, Architecture::kMlmmoe,
                         Architecture::kPle, Architecture::kAdattSp, Architecture::kSeq}) {
    if (name == ArchitectureName(a)) return a;
  }
  throw ConfigError("unknown architecture: " + name);
}

const char* MdModeName(MdMode m) {
  switch (m) {
    case MdMode::kNone: return "none";
    case MdMode::kInputPlug: return "input_plug";
    case MdMode::kInSequence: return "in_sequence";
  }
  return "none";
}

MdMode ParseMdMode(const std::string& name) {
  if (name == "none") return MdMode::kNone;
  if (name == "input_plug") return MdMode::kInputPlug;
  if (name == "in_sequence") return MdMode::kInSequence;
  throw ConfigError("unknown md mode: " + name + " (valid: none, input_plug, in_sequence)");
}

namespace {

void RequirePositive(const std::vector<int>& widths, const char* what) {
  for (int w : widths) {
    if (w <= 0) throw ConfigError(std::string(what) + " widths must be positive");
  }
}

}  // namespace

void ModelSpec::Validate() const {
  if (tasks.size() < 2) throw ConfigError("a model needs at least two tasks");
  for (std::size_t i = 1; i < tasks.size(); ++i) {
    if (static_cast<int>(tasks[i]) <= static_cast<int>(tasks[i - 1])) {
      throw ConfigError("tasks must be distinct and in funnel order");
    }
  }
  layout.Validate();
  if (md != MdMode::kNone) {
    if (layout.dependent_idx.empty()) {
      throw ConfigError(std::string("md mode ") + MdModeName(md) +
                        " requires a feature split with at least one dependent feature");
    }
    if (layout.country_idx.empty()) {
      throw ConfigError("md adaptor requires country features");
    }
    if (md_config.transform_widths.empty()) {
      throw ConfigError("md transform needs at least one output width");
    }
    RequirePositive(md_config.transform_widths, "md transform");
    RequirePositive(md_config.mask_hidden, "md mask");
  }
  if (md == MdMode::kInSequence && architecture != Architecture::kSeq) {
    throw ConfigError("in_sequence md placement exists only for the seq architecture");
  }
  if (architecture == Architecture::kSeq) {
    if (seq.hidden <= 0) throw ConfigError("seq hidden size must be positive");
    if (seq.stage1_layers < 1) throw ConfigError("seq needs at least one stage-1 GRU layer");
    if (seq.stage2_layers < 0) throw ConfigError("seq stage-2 layer count must be >= 0");
    RequirePositive(seq.token_hidden, "token mlp");
  } else {
    if (baseline.levels < 1) throw ConfigError("baseline levels must be >= 1");
    if (baseline.shared_experts < 1 || baseline.task_experts < 1) {
      throw ConfigError("expert counts must be >= 1");
    }
    if (baseline.expert_widths.empty() || baseline.bottom_widths.empty()) {
      throw ConfigError("expert and bottom widths must not be empty");
    }
    RequirePositive(baseline.expert_widths, "expert");
    RequirePositive(baseline.bottom_widths, "bottom");
    RequirePositive(baseline.tower_hidden, "tower");
  }
}

std::string ModelName(const ModelSpec& spec) {
  std::string name = ArchitectureName(spec.architecture);
  if (spec.md == MdMode::kInSequence) return name + "+md";
  if (spec.md == MdMode::kInputPlug) {
    return name + (spec.architecture == Architecture::kSeq ? "+md_plug" : "+md");
  }
  return name;
}

std::vector<std::string> ValidModelNames() {
  return {"shared_bottom", "mlmmoe",     "ple",     "adatt_sp",     "seq",
          "shared_bottom+md", "mlmmoe+md", "ple+md", "adatt_sp+md", "seq+md",
          "seq+md_plug"};
}

void ApplyModelName(const std::string& name, ModelSpec& spec) {
  const auto plus = name.find('+');
  const std::string base = name.substr(0, plus);
  const std::string suffix = plus == std::string::npos ? "" : name.substr(plus + 1);
  Architecture arch;
  try {
    arch = ParseArchitecture(base);
  } catch (const ConfigError&) {
    std::string valid;
    for (const auto& n : ValidModelNames()) valid += (valid.empty() ? "" : ", ") + n;
    throw ConfigError("unknown model '" + name + "' (valid: " + valid + ")");
  }
  spec.architecture = arch;
  if (suffix.empty()) {
    spec.md = MdMode::kNone;
  } else if (suffix == "md") {
    spec.md = arch == Architecture::kSeq ? MdMode::kInSequence : MdMode::kInputPlug;
  } else if (suffix == "md_plug") {
    spec.md = MdMode::kInputPlug;
  } else {
    throw ConfigError("unknown model suffix in '" + name + "'");
  }
}

void to_json(Json& j, const MdConfig& c) {
  j = Json{{"mask_hidden", c.mask_hidden},
           {"mask_hidden_activation", ActivationName(c.mask_hidden_activation)},
           {"mask_output_activation", ActivationName(c.mask_output_activation)},
           {"mask_bias_init", c.mask_bias_init},
           {"transform_widths", c.transform_widths},
           {"transform_hidden_activation", ActivationName(c.transform_hidden_activation)},
           {"transform_output_activation", ActivationName(c.transform_output_activation)}};
}

namespace {

void ReadActivation(const Json& j, const char* key, Activation& a) {
  if (j.contains(key)) a = ParseActivation(j.at(key).get<std::string>());
}

}  // namespace

void from_json(const Json& j, MdConfig& c) {
  RejectUnknownKeys(j,
                    {"mask_hidden", "mask_hidden_activation", "mask_output_activation",
                     "mask_bias_init", "transform_widths", "transform_hidden_activation",
                     "transform_output_activation"},
                    "md config");
  ReadOptional(j, "mask_hidden", c.mask_hidden);
  ReadActivation(j, "mask_hidden_activation", c.mask_hidden_activation);
  ReadActivation(j, "mask_output_activation", c.mask_output_activation);
  ReadOptional(j, "mask_bias_init", c.mask_bias_init);
  if (!std::isfinite(c.mask_bias_init)) throw ConfigError("mask_bias_init must be finite");
  ReadOptional(j, "transform_widths", c.transform_widths);
  ReadActivation(j, "transform_hidden_activation", c.transform_hidden_activation);
  ReadActivation(j, "transform_output_activation", c.transform_output_activation);
}

void to_json(Json& j, const SeqConfig& c) {
  j = Json{{"token_hidden", c.token_hidden},
           {"token_hidden_activation", ActivationName(c.token_hidden_activation)},
           {"hidden", c.hidden},
           {"stage1_layers", c.stage1_layers},
           {"stage2_layers", c.stage2_layers},
           {"regularizer", c.regularizer}};
}

void from_json(const Json& j, SeqConfig& c) {
  RejectUnknownKeys(j,
                    {"token_hidden", "token_hidden_activation", "hidden", "stage1_layers",
                     "stage2_layers", "regularizer"},
                    "seq config");
  ReadOptional(j, "token_hidden", c.token_hidden);
  ReadActivation(j, "token_hidden_activation", c.token_hidden_activation);
  ReadOptional(j, "hidden", c.hidden);
  ReadOptional(j, "stage1_layers", c.stage1_layers);
  ReadOptional(j, "stage2_layers", c.stage2_layers);
  ReadOptional(j, "regularizer", c.regularizer);
}

void to_json(Json& j, const BaselineConfig& c) {
  j = Json{{"levels", c.levels},
           {"shared_experts", c.shared_experts},
           {"task_experts", c.task_experts},
           {"expert_widths", c.expert_widths},
           {"bottom_widths", c.bottom_widths},
           {"tower_hidden", c.tower_hidden}};
}

void from_json(const Json& j, BaselineConfig& c) {
  RejectUnknownKeys(j,
                    {"levels", "shared_experts", "task_experts", "expert_widths",
                     "bottom_widths", "tower_hidden"},
                    "baseline config");
  ReadOptional(j, "levels", c.levels);
  ReadOptional(j, "shared_experts", c.shared_experts);
  ReadOptional(j, "task_experts", c.task_experts);
  ReadOptional(j, "expert_widths", c.expert_widths);
  ReadOptional(j, "bottom_widths", c.bottom_widths);
  ReadOptional(j, "tower_hidden", c.tower_hidden);
}

void to_json(Json& j, const ModelSpec& s) {
  Json tasks = Json::array();
  for (Task t : s.tasks) tasks.push_back(TaskName(t));
  j = Json{{"architecture", ArchitectureName(s.architecture)},
           {"tasks", tasks},
           {"md", MdModeName(s.md)},
           {"seed", s.seed},
           {"layout", s.layout},
           {"seq", s.seq},
           {"baseline", s.baseline},
           {"md_config", s.md_config}};
}

void from_json(const Json& j, ModelSpec& s) {
  RejectUnknownKeys(j,
                    {"architecture", "tasks", "md", "seed", "layout", "seq", "baseline",
                     "md_config"},
                    "model spec");
  if (j.contains("architecture")) {
    s.architecture = ParseArchitecture(j.at("architecture").get<std::string>());
  }
  if (j.contains("tasks")) {
    s.tasks.clear();
    for (const auto& t : j.at("tasks")) s.tasks.push_back(ParseTask(t.get<std::string>()));
  }
  if (j.contains("md")) s.md = ParseMdMode(j.at("md").get<std::string>());
  ReadOptional(j, "seed", s.seed);
  ReadOptional(j, "layout", s.layout);
  ReadOptional(j, "seq", s.seq);
  ReadOptional(j, "baseline", s.baseline);
  ReadOptional(j, "md_config", s.md_config);
}

}  // namespace seqmd
