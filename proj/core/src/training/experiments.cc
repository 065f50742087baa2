#include "seqmd/training/experiments.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <thread>

#include "seqmd/evaluation/scoring.h"
#include "seqmd/models/checkpoint.h"
#include "seqmd/models/factory.h"
#include "seqmd/random.h"

namespace seqmd {
namespace {

struct ExperimentInfo {
  ExperimentKind kind;
  const char* name;
};

constexpr ExperimentInfo kExperiments[] = {
    {ExperimentKind::kRegularizerAblation, "regularizer_ablation"},
    {ExperimentKind::kTransfer2to3, "transfer_2to3"},
    {ExperimentKind::kSingleVsAllRegion, "single_vs_all_region"},
    {ExperimentKind::kMdPlugPlay, "md_plugplay"},
    {ExperimentKind::kCompare, "compare"},
};

constexpr char kDomesticMetric[] = "domestic_share";

struct SeedOutcome {
  std::vector<ExperimentRow> rows;
  std::vector<TrainReport> reports;
};

ModelSpec ArmSpec(const ExperimentConfig& config, const std::string& model_name,
                  std::uint64_t seed, int tasks, const FeatureLayout& layout) {
  ModelSpec spec = config.model;
  ApplyModelName(model_name, spec);
  spec.tasks = DefaultTasks(tasks);
  spec.seed = seed;
  spec.layout = layout;
  if (spec.md == MdMode::kInSequence && layout.invariant_idx.empty()) {
    throw ConfigError("feature split left no invariant features for " + model_name +
                      "; raise split.threshold or generate more records per region");
  }
  return spec;
}

TrainConfig SeedTrainConfig(const ExperimentConfig& config, std::uint64_t seed) {
  TrainConfig t = config.train;
  t.seed = seed;
  return t;
}

// Region keys present in `groups`: "all" then ascending ids.
std::vector<std::string> RegionKeys(const std::vector<QueryGroup>& groups) {
  std::set<int> ids;
  for (const auto& g : groups) ids.insert(g.region);
  std::vector<std::string> keys{kAll};
  for (int r : ids) keys.push_back(std::to_string(r));
  return keys;
}

std::vector<ExperimentRow> RowsFromReport(const EvaluationReport& rep,
                                          const std::vector<std::string>& arms,
                                          std::uint64_t seed,
                                          const std::vector<std::string>& regions) {
  std::vector<ExperimentRow> rows;
  for (const std::string& arm : arms) {
    for (Task t : kAllTasks) {
      for (const std::string& region : regions) {
        const NdcgCell* c = rep.ndcg.Find(arm, TaskName(t), kAll, region);
        if (!c) continue;
        rows.push_back({arm, seed, TaskName(t), region, c->ndcg, c->delta_pct, c->groups});
      }
    }
    for (const std::string& region : regions) {
      const DomesticCell* c = rep.domestic.Find(arm, region);
      if (!c) continue;
      rows.push_back({arm, seed, kDomesticMetric, region, c->share, c->delta_pp, c->shown});
    }
  }
  return rows;
}

struct ScoredArm {
  std::string label;
  std::vector<Task> tasks;
  std::vector<Tensor> scores;
};

SeedOutcome EvaluateArms(const std::vector<ScoredArm>& arms, const PreparedData& data,
                         const ExperimentConfig& config, std::uint64_t seed) {
  std::vector<std::string> names;
  std::vector<std::vector<Task>> tasks;
  std::vector<std::vector<Tensor>> scores;
  for (const auto& a : arms) {
    names.push_back(a.label);
    tasks.push_back(a.tasks);
    scores.push_back(a.scores);
  }
  EvaluationReport rep = EvaluateScores(names, tasks, scores, data.eval(), config.eval);
  SeedOutcome out;
  out.rows = RowsFromReport(rep, names, seed, RegionKeys(data.eval()));
  return out;
}

// Trains a fresh model of `model_name` and scores the validation groups.
ScoredArm TrainArm(const std::string& label, const ModelSpec& spec, const PreparedData& data,
                   const TrainConfig& train, std::vector<TrainReport>& reports) {
  auto model = BuildModel(spec);
  reports.push_back(Train(*model, data.train, data.val, train));
  return {label, model->tasks(), ScoreGroups(*model, data.eval())};
}

SeedOutcome RunArmList(const ExperimentConfig& config, std::uint64_t seed,
                       const std::vector<std::pair<std::string, ModelSpec>>& arms,
                       const PreparedData& data) {
  std::vector<TrainReport> reports;
  std::vector<ScoredArm> scored;
  const TrainConfig train = SeedTrainConfig(config, seed);
  for (const auto& [label, spec] : arms) scored.push_back(TrainArm(label, spec, data, train, reports));
  SeedOutcome out = EvaluateArms(scored, data, config, seed);
  out.reports = std::move(reports);
  return out;
}

SeedOutcome RunSeed(ExperimentKind kind, const ExperimentConfig& config, std::uint64_t seed) {
  const PreparedData data = PrepareData(config, seed);
  const int k = config.tasks;
  auto spec = [&](const std::string& name, int tasks) {
    return ArmSpec(config, name, seed, tasks, data.layout);
  };
  switch (kind) {
    case ExperimentKind::kCompare: {
      std::vector<std::pair<std::string, ModelSpec>> arms;
      for (const auto& name : config.arms) arms.emplace_back(name, spec(name, k));
      return RunArmList(config, seed, arms, data);
    }
    case ExperimentKind::kMdPlugPlay: {
      std::vector<std::pair<std::string, ModelSpec>> arms;
      for (const char* base : {"shared_bottom", "mlmmoe", "ple", "adatt_sp"}) {
        arms.emplace_back(base, spec(base, k));
        arms.emplace_back(std::string(base) + "+md", spec(std::string(base) + "+md", k));
      }
      return RunArmList(config, seed, arms, data);
    }
    case ExperimentKind::kRegularizerAblation: {
      ModelSpec off = spec("seq", k);
      off.seq.regularizer = false;
      ModelSpec on = spec("seq", k);
      on.seq.regularizer = true;
      return RunArmList(config, seed,
                        {{"shared_bottom", spec("shared_bottom", k)},
                         {"seq/regularizer_on", on},
                         {"seq/regularizer_off", off}},
                        data);
    }
    case ExperimentKind::kTransfer2to3: {
      std::vector<TrainReport> reports;
      const TrainConfig train = SeedTrainConfig(config, seed);
      std::vector<ScoredArm> scored;
      scored.push_back(TrainArm("shared_bottom", spec("shared_bottom", 3), data, train, reports));
      auto source = BuildModel(spec("seq+md", 2));
      reports.push_back(Train(*source, data.train, data.val, train));
      scored.push_back({"source_2task", source->tasks(), ScoreGroups(*source, data.eval())});
      const Checkpoint ck = Snapshot(*source);
      ModelSpec target = spec("seq+md", 3);
      target.seed = DeriveSeed(seed, "transfer");
      auto zero_shot = LoadModel(ck, target);
      scored.push_back({"zero_shot", zero_shot->tasks(), ScoreGroups(*zero_shot, data.eval())});
      auto fine = LoadModel(ck, target);
      reports.push_back(Train(*fine, data.train, data.val, train));
      scored.push_back({"fine_tuned", fine->tasks(), ScoreGroups(*fine, data.eval())});
      SeedOutcome out = EvaluateArms(scored, data, config, seed);
      out.reports = std::move(reports);
      return out;
    }
    case ExperimentKind::kSingleVsAllRegion: {
      std::vector<TrainReport> reports;
      const TrainConfig train = SeedTrainConfig(config, seed);
      std::vector<ScoredArm> scored;
      scored.push_back(TrainArm("shared_bottom", spec("shared_bottom", k), data, train, reports));
      scored.push_back(TrainArm("seq+md/all_regions", spec("seq+md", k), data, train, reports));
      // Each buyer region is served by the model trained on that region alone.
      ScoredArm single{"seq+md/single_region", DefaultTasks(k),
                       std::vector<Tensor>(data.eval().size())};
      std::set<int> regions;
      for (const auto& g : data.eval()) regions.insert(g.region);
      for (int r : regions) {
        TrainConfig regional = train;
        regional.region = r;
        auto model = BuildModel(spec("seq+md", k));
        reports.push_back(Train(*model, data.train, data.val, regional));
        std::vector<QueryGroup> subset;
        std::vector<std::size_t> where;
        for (std::size_t g = 0; g < data.eval().size(); ++g) {
          if (data.eval()[g].region == r) {
            subset.push_back(data.eval()[g]);
            where.push_back(g);
          }
        }
        auto s = ScoreGroups(*model, subset);
        for (std::size_t i = 0; i < where.size(); ++i) single.scores[where[i]] = std::move(s[i]);
      }
      scored.push_back(std::move(single));
      SeedOutcome out = EvaluateArms(scored, data, config, seed);
      out.reports = std::move(reports);
      return out;
    }
  }
  throw ConfigError("unknown experiment");
}

double Mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double SampleStdev(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = Mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

std::string Signed(double v, int digits) {
  std::string s = FormatFixed(v, digits);
  return (v > 0.0 && s.find_first_not_of("0.") != std::string::npos) ? "+" + s : s;
}

}  // namespace

const char* ExperimentName(ExperimentKind k) {
  for (const auto& e : kExperiments) {
    if (e.kind == k) return e.name;
  }
  return "compare";
}

ExperimentKind ParseExperiment(const std::string& name) {
  for (const auto& e : kExperiments) {
    if (name == e.name) return e.kind;
  }
  std::string valid;
  for (const auto& n : ExperimentNames()) valid += (valid.empty() ? "" : ", ") + n;
  throw ConfigError("unknown experiment '" + name + "' (valid: " + valid + ")");
}

std::vector<std::string> ExperimentNames() {
  std::vector<std::string> names;
  for (const auto& e : kExperiments) names.emplace_back(e.name);
  return names;
}

void to_json(Json& j, const ExperimentConfig& c) {
  j = Json::object();
  j["data"] = c.data;
  j["seeds"] = c.seeds;
  j["train"] = c.train;
  Json model = c.model;
  model.erase("layout");
  model.erase("seed");
  model.erase("architecture");
  model.erase("md");
  model.erase("tasks");
  j["model"] = std::move(model);
  j["tasks"] = c.tasks;
  j["test_queries"] = c.test_queries;
  j["split"] = c.split;
  j["eval"] = c.eval;
  j["arms"] = c.arms;
  j["threads"] = c.threads;
}

void from_json(const Json& j, ExperimentConfig& c) {
  RejectUnknownKeys(j, {"data", "seeds", "train", "model", "tasks", "test_queries", "split", "eval", "arms",
                        "threads"},
                    "experiment config");
  if (j.contains("data")) c.data = j.at("data").get<GeneratorConfig>();
  ReadOptional(j, "seeds", c.seeds);
  if (j.contains("train")) c.train = j.at("train").get<TrainConfig>();
  if (j.contains("model")) {
    Json m = j.at("model");
    RejectUnknownKeys(m, {"seq", "baseline", "md_config"}, "experiment model");
    if (m.contains("seq")) c.model.seq = m.at("seq").get<SeqConfig>();
    if (m.contains("baseline")) c.model.baseline = m.at("baseline").get<BaselineConfig>();
    if (m.contains("md_config")) c.model.md_config = m.at("md_config").get<MdConfig>();
  }
  ReadOptional(j, "tasks", c.tasks);
  ReadOptional(j, "test_queries", c.test_queries);
  if (c.test_queries < 0) throw ConfigError("test_queries must be >= 0");
  if (j.contains("split")) c.split = j.at("split").get<SplitOptions>();
  if (j.contains("eval")) c.eval = j.at("eval").get<EvalOptions>();
  ReadOptional(j, "arms", c.arms);
  ReadOptional(j, "threads", c.threads);
  if (c.tasks != 2 && c.tasks != 3) throw ConfigError("tasks must be 2 or 3");
  if (c.seeds.empty()) throw ConfigError("at least one seed is required");
  if (c.threads < 1) throw ConfigError("threads must be >= 1");
}

const SummaryRow* ExperimentResult::Find(const std::string& arm, const std::string& metric,
                                         const std::string& region) const {
  for (const auto& s : summary) {
    if (s.arm == arm && s.metric == metric && s.region == region) return &s;
  }
  return nullptr;
}

PreparedData PrepareData(const ExperimentConfig& config, std::uint64_t seed) {
  GeneratorConfig gen = config.data;
  gen.seed = seed;
  const std::vector<QueryGroup> groups = Generate(gen);
  GroupSplit split = SplitByQueryHash(groups, config.train.val_fraction);
  if (split.val.empty()) throw ConfigError("validation split is empty; raise val_fraction");
  PreparedData data;
  data.split = SplitFeatures(std::span<const QueryGroup>(split.train),
                             CountryFeatureIndices(gen), config.split);
  data.layout = LayoutFromSplit(data.split);
  data.train = std::move(split.train);
  data.val = std::move(split.val);
  if (config.test_queries > 0) data.test = GenerateRange(gen, gen.queries, config.test_queries);
  return data;
}

void ParallelFor(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::mutex mu;
  std::size_t next = 0;
  std::exception_ptr error;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i;
        {
          std::lock_guard<std::mutex> lock(mu);
          if (next >= n || error) return;
          i = next++;
        }
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<SummaryRow> Summarize(const std::vector<ExperimentRow>& rows) {
  struct Acc {
    std::vector<double> values, deltas;
    bool all_deltas = true;
  };
  std::vector<std::tuple<std::string, std::string, std::string>> order;
  std::map<std::tuple<std::string, std::string, std::string>, Acc> acc;
  for (const auto& r : rows) {
    auto key = std::make_tuple(r.arm, r.metric, r.region);
    if (!acc.count(key)) order.push_back(key);
    Acc& a = acc[key];
    a.values.push_back(r.value);
    if (r.delta) {
      a.deltas.push_back(*r.delta);
    } else {
      a.all_deltas = false;
    }
  }
  std::vector<SummaryRow> out;
  for (const auto& key : order) {
    const Acc& a = acc.at(key);
    SummaryRow s{std::get<0>(key), std::get<1>(key), std::get<2>(key), a.values.size(),
                 Mean(a.values), SampleStdev(a.values), std::nullopt, std::nullopt};
    if (a.all_deltas && !a.deltas.empty()) {
      s.delta_mean = Mean(a.deltas);
      s.delta_stdev = SampleStdev(a.deltas);
    }
    out.push_back(s);
  }
  return out;
}

ExperimentResult RunExperiment(ExperimentKind kind, const ExperimentConfig& config) {
  config.data.Validate();
  config.train.Validate();
  std::vector<SeedOutcome> outcomes(config.seeds.size());
  ParallelFor(config.seeds.size(), config.threads,
              [&](std::size_t i) { outcomes[i] = RunSeed(kind, config, config.seeds[i]); });
  ExperimentResult result;
  result.experiment = ExperimentName(kind);
  for (auto& o : outcomes) {
    for (auto& r : o.rows) {
      if (std::find(result.arms.begin(), result.arms.end(), r.arm) == result.arms.end()) {
        result.arms.push_back(r.arm);
      }
      result.rows.push_back(std::move(r));
    }
    for (auto& t : o.reports) result.train_reports.push_back(std::move(t));
  }
  result.summary = Summarize(result.rows);
  return result;
}

void WriteExperimentCsv(const ExperimentResult& r, std::ostream& out) {
  out << "experiment,arm,seed,metric,region,value,delta,groups\n";
  for (const auto& row : r.rows) {
    out << r.experiment << ',' << row.arm << ',' << row.seed << ',' << row.metric << ','
        << row.region << ',' << FormatFixed(row.value, 6) << ','
        << (row.delta ? FormatFixed(*row.delta, 4) : "") << ',' << row.groups << '\n';
  }
}

void WriteSummaryCsv(const ExperimentResult& r, std::ostream& out) {
  out << "experiment,arm,metric,region,runs,mean,stdev,delta_mean,delta_stdev\n";
  for (const auto& s : r.summary) {
    out << r.experiment << ',' << s.arm << ',' << s.metric << ',' << s.region << ',' << s.runs
        << ',' << FormatFixed(s.mean, 6) << ',' << FormatFixed(s.stdev, 6) << ','
        << (s.delta_mean ? FormatFixed(*s.delta_mean, 4) : "") << ','
        << (s.delta_stdev ? FormatFixed(*s.delta_stdev, 4) : "") << '\n';
  }
}

std::string FormatExperimentReport(const ExperimentResult& r, const ExperimentConfig& config) {
  std::string out = "Experiment: " + r.experiment + "\n";
  out += "Seeds:";
  for (auto s : config.seeds) out += " " + std::to_string(s);
  out += "\nRecords per seed: " +
         std::to_string(static_cast<long long>(config.data.queries) * config.data.candidates) +
         " (" + std::to_string(config.data.regions) + " regions)\n\n";

  std::vector<std::string> metrics;
  std::vector<std::string> regions;
  for (const auto& s : r.summary) {
    if (std::find(metrics.begin(), metrics.end(), s.metric) == metrics.end()) {
      metrics.push_back(s.metric);
    }
    if (std::find(regions.begin(), regions.end(), s.region) == regions.end()) {
      regions.push_back(s.region);
    }
  }
  for (const auto& metric : metrics) {
    const bool domestic = metric == kDomesticMetric;
    out += (domestic ? std::string("Domestic listing share in the top ") +
                           std::to_string(config.eval.top_n) +
                           ": mean, and change vs shared_bottom in pp (mean +- sd)\n"
                     : metric + " NDCG: mean, and change vs shared_bottom in % (mean +- sd)\n");
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header{"arm"};
    for (const auto& reg : regions) header.push_back(reg == kAll ? "all" : "region " + reg);
    for (const auto& reg : regions) header.push_back(reg == kAll ? "change all" : "change r" + reg);
    rows.push_back(header);
    for (const auto& arm : r.arms) {
      std::vector<std::string> row{arm};
      bool any = false;
      for (const auto& reg : regions) {
        const SummaryRow* s = r.Find(arm, metric, reg);
        row.push_back(s ? FormatFixed(s->mean, 4) : "-");
        any = any || s;
      }
      for (const auto& reg : regions) {
        const SummaryRow* s = r.Find(arm, metric, reg);
        row.push_back(s && s->delta_mean
                          ? Signed(*s->delta_mean, 3) + " +- " + FormatFixed(*s->delta_stdev, 3)
                          : "-");
      }
      if (any) rows.push_back(row);
    }
    out += AlignedTable(rows) + "\n";
  }
  out += ReportFooter(config.eval);
  return out;
}

}  // namespace seqmd
