#ifndef SEQMD_MODELS_PARAM_COUNT_H_
#define SEQMD_MODELS_PARAM_COUNT_H_

#include <cstddef>
#include <string>
#include <vector>

#include "seqmd/json_util.h"
#include "seqmd/models/model.h"

namespace seqmd {

struct ComponentCount {
  std::string component;
  std::size_t count = 0;
};

struct ParamTable {
  std::string model;
  std::vector<ComponentCount> components;  // in creation order
  std::size_t total = 0;

  std::size_t Of(const std::string& component) const;
};

// "seq.stage1.0.W_z" -> "seq.stage1.0", "tower.click.l1.weight" -> "tower.click".
std::string ComponentOf(const std::string& param_name);

ParamTable CountParams(const RankingModel& model);
ParamTable CountParams(const ModelSpec& spec);

// 100 * (to - from) / from
double GrowthPercent(std::size_t from, std::size_t to);

std::string FormatParamTable(const ParamTable& table);
void to_json(Json& j, const ParamTable& t);

}  // namespace seqmd

#endif  // SEQMD_MODELS_PARAM_COUNT_H_
