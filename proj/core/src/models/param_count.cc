#include "seqmd/models/param_count.h"

#include <algorithm>
#include <cctype>

#include "seqmd/error.h"
#include "seqmd/models/factory.h"

namespace seqmd {
namespace {

bool IsLayerSegment(std::string_view s) {
  return s.size() >= 2 && s[0] == 'l' &&
         std::all_of(s.begin() + 1, s.end(), [](char c) { return std::isdigit(c) != 0; });
}

}  // namespace

std::size_t ParamTable::Of(const std::string& component) const {
  for (const auto& c : components) {
    if (c.component == component) return c.count;
  }
  return 0;
}

std::string ComponentOf(const std::string& param_name) {
  std::string name = param_name;
  auto cut = name.rfind('.');
  if (cut == std::string::npos) return name;
  name.resize(cut);
  cut = name.rfind('.');
  if (IsLayerSegment(std::string_view(name).substr(cut == std::string::npos ? 0 : cut + 1))) {
    name.resize(cut == std::string::npos ? 0 : cut);
  }
  return name;
}

ParamTable CountParams(const RankingModel& model) {
  ParamTable table;
  table.model = ModelName(model.spec());
  for (const Parameter* p : model.params().All()) {
    const std::string comp = ComponentOf(p->name);
    auto it = std::find_if(table.components.begin(), table.components.end(),
                           [&](const ComponentCount& c) { return c.component == comp; });
    if (it == table.components.end()) {
      table.components.push_back({comp, 0});
      it = table.components.end() - 1;
    }
    it->count += p->size();
    table.total += p->size();
  }
  return table;
}

ParamTable CountParams(const ModelSpec& spec) { return CountParams(*BuildModel(spec)); }

double GrowthPercent(std::size_t from, std::size_t to) {
  if (from == 0) throw ConfigError("growth from an empty model is undefined");
  return 100.0 * (static_cast<double>(to) - static_cast<double>(from)) /
         static_cast<double>(from);
}

std::string FormatParamTable(const ParamTable& table) {
  std::size_t width = 5;
  for (const auto& c : table.components) width = std::max(width, c.component.size());
  std::string out = table.model + "\n";
  auto line = [&](const std::string& name, std::size_t n) {
    std::string num = std::to_string(n);
    out += "  " + name + std::string(width - name.size() + 2, ' ');
    out += std::string(num.size() < 10 ? 10 - num.size() : 0, ' ') + num + "\n";
  };
  for (const auto& c : table.components) line(c.component, c.count);
  line("total", table.total);
  return out;
}

void to_json(Json& j, const ParamTable& t) {
  j = Json::object();
  j["model"] = t.model;
  Json comps = Json::array();
  for (const auto& c : t.components) comps.push_back({{"component", c.component}, {"count", c.count}});
  j["components"] = std::move(comps);
  j["total"] = t.total;
}

}  // namespace seqmd
