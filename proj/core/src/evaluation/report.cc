#include "seqmd/evaluation/report.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <ostream>
#include <set>

#include "seqmd/error.h"
#include "seqmd/evaluation/scoring.h"

namespace seqmd {
namespace {

bool PlatformMatches(const QueryGroup& g, const std::string& platform) {
  return platform == kAll || platform == PlatformName(g.platform);
}

bool RegionMatches(const QueryGroup& g, const std::string& region) {
  return region == kAll || region == std::to_string(g.region);
}

std::vector<std::pair<std::string, std::string>> Breakdowns(std::span<const QueryGroup> groups) {
  std::set<int> regions;
  for (const auto& g : groups) regions.insert(g.region);
  std::vector<std::pair<std::string, std::string>> out{
      {kAll, kAll}, {"web", kAll}, {"app", kAll}};
  for (int r : regions) out.emplace_back(kAll, std::to_string(r));
  return out;
}

std::string OptionalFixed(const std::optional<double>& v, int digits) {
  return v ? FormatFixed(*v, digits) : std::string();
}

}  // namespace

void to_json(Json& j, const EvalOptions& o) {
  j = Json{{"depth", o.depth}, {"gain", GainKindName(o.gain)}, {"top_n", o.top_n}};
}

void from_json(const Json& j, EvalOptions& o) {
  RejectUnknownKeys(j, {"depth", "gain", "top_n"}, "evaluation options");
  ReadOptional(j, "depth", o.depth);
  std::string gain = GainKindName(o.gain);
  ReadOptional(j, "gain", gain);
  o.gain = ParseGainKind(gain);
  ReadOptional(j, "top_n", o.top_n);
  if (o.depth < 1) throw ConfigError("depth must be >= 1");
  if (o.top_n < 1) throw ConfigError("top_n must be >= 1");
}

const NdcgCell* NdcgReport::Find(const std::string& model, const std::string& task,
                                 const std::string& platform, const std::string& region) const {
  for (const auto& c : cells) {
    if (c.model == model && c.task == task && c.platform == platform && c.region == region) {
      return &c;
    }
  }
  return nullptr;
}

const DomesticCell* DomesticShareReport::Find(const std::string& model,
                                              const std::string& region) const {
  for (const auto& c : cells) {
    if (c.model == model && c.region == region) return &c;
  }
  return nullptr;
}

std::string FormatFixed(double v, int digits) {
  if (!std::isfinite(v)) return "";
  if (v == 0.0) v = 0.0;  // no "-0.000"
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, digits);
  std::string s(buf, res.ptr);
  if (s.find_first_not_of("-0.") == std::string::npos && s[0] == '-') s.erase(0, 1);
  return s;
}

double DomesticShare(std::span<const QueryGroup> groups, const std::vector<Tensor>& scores,
                     std::size_t column, std::size_t top_n, std::size_t* shown) {
  std::size_t n = 0, domestic = 0;
  std::vector<double> col;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    col.resize(scores[i].rows());
    for (std::size_t r = 0; r < col.size(); ++r) col[r] = scores[i](r, column);
    const auto order = RankByScore(col);
    for (std::size_t p = 0; p < order.size() && p < top_n; ++p) {
      ++n;
      domestic += groups[i].records[order[p]].is_domestic() ? 1 : 0;
    }
  }
  if (shown) *shown = n;
  return n ? static_cast<double>(domestic) / static_cast<double>(n) : 0.0;
}

EvaluationReport EvaluateScores(const std::vector<std::string>& names,
                                const std::vector<std::vector<Task>>& tasks,
                                const std::vector<std::vector<Tensor>>& scores,
                                std::span<const QueryGroup> groups, const EvalOptions& options) {
  const auto base_it = std::find(names.begin(), names.end(), kBaselineModel);
  if (base_it == names.end()) {
    throw ConfigError("evaluation needs the shared_bottom baseline among the models");
  }
  EvaluationReport rep;
  rep.ndcg.options = options;
  rep.ndcg.models = names;
  rep.domestic.top_n = options.top_n;
  const auto breakdowns = Breakdowns(groups);

  std::vector<std::vector<std::size_t>> members(breakdowns.size());
  for (std::size_t b = 0; b < breakdowns.size(); ++b) {
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (PlatformMatches(groups[g], breakdowns[b].first) &&
          RegionMatches(groups[g], breakdowns[b].second)) {
        members[b].push_back(g);
      }
    }
  }
  std::vector<double> col;
  for (std::size_t m = 0; m < names.size(); ++m) {
    if (scores[m].size() != groups.size()) throw DimensionError("score count mismatch");
    for (std::size_t t = 0; t < tasks[m].size(); ++t) {
      for (std::size_t b = 0; b < breakdowns.size(); ++b) {
        NdcgStat s;
        for (std::size_t g : members[b]) {
          const Tensor& sc = scores[m][g];
          col.resize(sc.rows());
          for (std::size_t r = 0; r < col.size(); ++r) col[r] = sc(r, t);
          s.Add(NdcgForTask(groups[g], col, tasks[m][t], options.depth, options.gain));
        }
        rep.ndcg.cells.push_back({names[m], TaskName(tasks[m][t]), breakdowns[b].first,
                                  breakdowns[b].second, s.mean(), s.count, s.excluded,
                                  std::nullopt});
      }
    }
  }
  for (NdcgCell& c : rep.ndcg.cells) {
    const NdcgCell* base = rep.ndcg.Find(kBaselineModel, c.task, c.platform, c.region);
    if (base && base->groups > 0 && base->ndcg > 0.0 && c.groups > 0) {
      c.delta_pct = c.model == kBaselineModel ? 0.0 : (c.ndcg - base->ndcg) / base->ndcg * 100.0;
    }
  }

  std::set<int> regions;
  for (const auto& g : groups) regions.insert(g.region);
  std::vector<std::string> region_keys{kAll};
  for (int r : regions) region_keys.push_back(std::to_string(r));
  for (std::size_t m = 0; m < names.size(); ++m) {
    const auto& tk = tasks[m];
    const auto it = std::find(tk.begin(), tk.end(), Task::kPurchase);
    const std::size_t c =
        it != tk.end() ? static_cast<std::size_t>(it - tk.begin()) : tk.size() - 1;
    for (const std::string& region : region_keys) {
      std::size_t shown = 0, domestic = 0;
      for (std::size_t g = 0; g < groups.size(); ++g) {
        if (!RegionMatches(groups[g], region)) continue;
        const Tensor& sc = scores[m][g];
        col.resize(sc.rows());
        for (std::size_t r = 0; r < col.size(); ++r) col[r] = sc(r, c);
        const auto order = RankByScore(col);
        for (std::size_t p = 0; p < order.size() && p < options.top_n; ++p) {
          ++shown;
          domestic += groups[g].records[order[p]].is_domestic() ? 1 : 0;
        }
      }
      const double share =
          shown ? static_cast<double>(domestic) / static_cast<double>(shown) : 0.0;
      rep.domestic.cells.push_back({names[m], region, share, shown, std::nullopt});
    }
  }
  for (DomesticCell& c : rep.domestic.cells) {
    const DomesticCell* base = rep.domestic.Find(kBaselineModel, c.region);
    if (base && base->shown > 0) {
      c.delta_pp = c.model == kBaselineModel ? 0.0 : (c.share - base->share) * 100.0;
    }
  }
  return rep;
}

EvaluationReport EvaluateModels(const std::vector<NamedModel>& models,
                                std::span<const QueryGroup> groups, const EvalOptions& options) {
  std::vector<std::string> names;
  for (const auto& m : models) names.push_back(m.name);
  if (std::find(names.begin(), names.end(), kBaselineModel) == names.end()) {
    throw ConfigError("evaluation needs the shared_bottom baseline among the models");
  }
  std::vector<std::vector<Task>> tasks;
  std::vector<std::vector<Tensor>> scores;
  for (const auto& m : models) {
    tasks.push_back(m.model->tasks());
    scores.push_back(ScoreGroups(*m.model, groups));
  }
  return EvaluateScores(names, tasks, scores, groups, options);
}

std::string AlignedTable(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    if (width.size() < row.size()) width.resize(row.size(), 0);
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::string out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::string line;
    for (std::size_t c = 0; c < width.size(); ++c) {
      const std::string cell = c < rows[r].size() ? rows[r][c] : "";
      const std::string pad(width[c] - cell.size(), ' ');
      if (c) line += "  ";
      line += c == 0 ? cell + pad : pad + cell;
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
    if (r == 0) {
      std::size_t total = 0;
      for (std::size_t w : width) total += w;
      out += std::string(total + 2 * (width.size() - 1), '-') + "\n";
    }
  }
  return out;
}

void WriteNdcgCsv(const NdcgReport& report, std::ostream& out) {
  out << "model,task,platform,region,ndcg,delta_pct,groups,excluded_groups,depth,gain\n";
  for (const auto& c : report.cells) {
    out << c.model << ',' << c.task << ',' << c.platform << ',' << c.region << ','
        << FormatFixed(c.ndcg, 6) << ',' << OptionalFixed(c.delta_pct, 4) << ',' << c.groups
        << ',' << c.excluded << ',' << report.options.depth << ','
        << GainKindName(report.options.gain) << '\n';
  }
}

void WriteDomesticCsv(const DomesticShareReport& report, std::ostream& out) {
  out << "model,region,domestic_share,delta_pp,shown,top_n\n";
  for (const auto& c : report.cells) {
    out << c.model << ',' << c.region << ',' << FormatFixed(c.share, 6) << ','
        << OptionalFixed(c.delta_pp, 4) << ',' << c.shown << ',' << report.top_n << '\n';
  }
}

std::string ReportFooter(const EvalOptions& options) {
  std::string s;
  s += "NDCG: " + std::string(GainKindName(options.gain)) +
       (options.gain == GainKind::kBinary ? " per-task gains" : " gains (0/1/2/4)") +
       ", truncated at depth " + std::to_string(options.depth) +
       "; groups with no positive label for a task are excluded (see excluded_groups).\n";
  s += "Deltas are relative to shared_bottom in percent; domestic share deltas are in "
       "percentage points over the top " +
       std::to_string(options.top_n) + " by purchase score.\n";
  s += "Held-out data: query groups selected by a hash of query_id (no time-based split).\n";
  return s;
}

std::string FormatReportTables(const EvaluationReport& report, const std::string& title) {
  const NdcgReport& nd = report.ndcg;
  std::vector<std::string> task_order;
  for (Task t : kAllTasks) {
    for (const auto& c : nd.cells) {
      if (c.task == TaskName(t)) {
        task_order.emplace_back(TaskName(t));
        break;
      }
    }
  }
  const std::vector<std::string> platforms{kAll, "web", "app"};
  std::set<std::string> region_set;
  for (const auto& c : nd.cells) {
    if (c.region != kAll) region_set.insert(c.region);
  }
  std::vector<std::string> regions(region_set.begin(), region_set.end());
  std::sort(regions.begin(), regions.end(), [](const std::string& a, const std::string& b) {
    return std::stoi(a) < std::stoi(b);
  });

  auto table = [&](bool delta, bool by_region) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header{"model"};
    const auto& cols = by_region ? regions : platforms;
    for (const auto& t : task_order) {
      for (const auto& c : cols) header.push_back(t + (by_region ? " r" : " ") + c);
    }
    rows.push_back(header);
    for (const auto& m : nd.models) {
      std::vector<std::string> row{m};
      for (const auto& t : task_order) {
        for (const auto& c : cols) {
          const NdcgCell* cell =
              by_region ? nd.Find(m, t, kAll, c) : nd.Find(m, t, c, kAll);
          if (!cell) {
            row.emplace_back("-");
          } else if (delta) {
            row.push_back(cell->delta_pct ? FormatFixed(*cell->delta_pct, 3) + "%" : "-");
          } else {
            row.push_back(FormatFixed(cell->ndcg, 4));
          }
        }
      }
      rows.push_back(row);
    }
    return AlignedTable(rows);
  };

  std::string out = title + "\n\n";
  out += "NDCG change vs shared_bottom\n" + table(true, false) + "\n";
  out += "NDCG\n" + table(false, false) + "\n";
  if (!regions.empty()) out += "NDCG change vs shared_bottom by buyer region\n" + table(true, true) + "\n";

  std::vector<std::vector<std::string>> drows;
  std::vector<std::string> dh{"model", "share all"};
  for (const auto& r : regions) dh.push_back("share r" + r);
  dh.emplace_back("change all (pp)");
  for (const auto& r : regions) dh.push_back("change r" + r + " (pp)");
  drows.push_back(dh);
  for (const auto& m : nd.models) {
    std::vector<std::string> row{m};
    std::vector<std::string> keys{kAll};
    keys.insert(keys.end(), regions.begin(), regions.end());
    for (const auto& k : keys) {
      const DomesticCell* c = report.domestic.Find(m, k);
      row.push_back(c ? FormatFixed(c->share, 4) : "-");
    }
    for (const auto& k : keys) {
      const DomesticCell* c = report.domestic.Find(m, k);
      row.push_back(c && c->delta_pp ? FormatFixed(*c->delta_pp, 3) : "-");
    }
    drows.push_back(row);
  }
  out += "Domestic listing share in the top " + std::to_string(report.domestic.top_n) + "\n" +
         AlignedTable(drows) + "\n";
  out += ReportFooter(nd.options);
  return out;
}

}  // namespace seqmd
