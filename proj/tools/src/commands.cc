#include "commands.h"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "seqmd/datasets/feature_split.h"
#include "seqmd/datasets/generator.h"
#include "seqmd/datasets/jsonl.h"
#include "seqmd/evaluation/report.h"
#include "seqmd/evaluation/scoring.h"
#include "seqmd/models/checkpoint.h"
#include "seqmd/models/factory.h"
#include "seqmd/models/param_count.h"
#include "seqmd/training/experiments.h"
#include "seqmd/training/trainer.h"

namespace seqmd::cli {
namespace fs = std::filesystem;
namespace {

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(' ');
    const auto e = item.find_last_not_of(' ');
    items.push_back(b == std::string::npos ? "" : item.substr(b, e - b + 1));
  }
  return items;
}

template <typename T>
std::vector<T> ParseNumberList(const std::string& text, const std::string& what) {
  std::vector<T> out;
  for (const auto& item : SplitList(text)) {
    T v{};
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
      throw UsageError("malformed " + what + " list '" + text + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw UsageError("empty " + what + " list");
  return out;
}

void WriteText(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
}

void WriteJson(const fs::path& path, const Json& j) { WriteText(path, j.dump(2) + "\n"); }

template <typename Fn>
void WriteStream(const fs::path& path, Fn fn) {
  std::ostringstream s;
  fn(s);
  WriteText(path, s.str());
}

Dataset ReadData(const std::string& path) {
  if (path.empty()) throw UsageError("no data file given (use --data)");
  if (!fs::exists(path)) throw UsageError("data file '" + path + "' does not exist");
  Dataset d = ReadJsonl(fs::path(path));
  if (d.groups.empty()) throw FormatError("data file '" + path + "' holds no query groups");
  return d;
}

std::vector<int> CountryIndices(const DatasetHeader& h) {
  return CountryFeatureIndices(h.m - h.regions, h.regions);
}

// Model selection as stored in configs: a model name, a task list and the
// width settings of every family.
Json DefaultModelChoice() {
  const Json spec = ModelSpec{};
  return Json{{"name", "seq+md"},
              {"tasks", {"click", "add_to_cart", "purchase"}},
              {"seq", spec.at("seq")},
              {"baseline", spec.at("baseline")},
              {"md_config", spec.at("md_config")}};
}

// Everything but the layout-dependent checks.
ModelSpec UncheckedSpec(const Json& choice) {
  RejectUnknownKeys(choice, {"name", "tasks", "seq", "baseline", "md_config"}, "model");
  ModelSpec spec;
  if (choice.contains("name")) ApplyModelName(choice.at("name").get<std::string>(), spec);
  if (choice.contains("tasks")) {
    spec.tasks.clear();
    for (const auto& t : choice.at("tasks")) spec.tasks.push_back(ParseTask(t.get<std::string>()));
  }
  if (choice.contains("seq")) spec.seq = choice.at("seq").get<SeqConfig>();
  if (choice.contains("baseline")) spec.baseline = choice.at("baseline").get<BaselineConfig>();
  if (choice.contains("md_config")) spec.md_config = choice.at("md_config").get<MdConfig>();
  return spec;
}

ModelSpec SpecFromChoice(const Json& choice, const FeatureLayout& layout, std::uint64_t seed) {
  ModelSpec spec = UncheckedSpec(choice);
  spec.layout = layout;
  spec.seed = seed;
  spec.Validate();
  return spec;
}

Json TaskNames(const std::vector<Task>& tasks) {
  Json j = Json::array();
  for (Task t : tasks) j.push_back(TaskName(t));
  return j;
}

void ApplyModelFlags(const ModelFlags& f, Json& choice) {
  if (f.model) {
    ModelSpec probe;
    ApplyModelName(*f.model, probe);
    choice["name"] = *f.model;
  }
  if (f.md) {
    ModelSpec probe;
    ApplyModelName(choice.at("name").get<std::string>(), probe);
    probe.md = ParseMdMode(*f.md);
    if (probe.md == MdMode::kInSequence && probe.architecture != Architecture::kSeq) {
      throw ConfigError("--md in_sequence applies to the seq model only; use input_plug");
    }
    choice["name"] = ModelName(probe);
  }
  if (f.tasks) {
    try {
      choice["tasks"] = TaskNames(ParseTaskList(*f.tasks));
    } catch (const ConfigError& e) {
      throw UsageError(std::string("malformed task list: ") + e.what());
    }
  }
}

std::string FeatureName(const DatasetHeader& h, int j) {
  const int user = h.m - h.regions;
  if (j < user) return "user_" + std::to_string(j);
  if (j < h.m) return "region_" + std::to_string(j - user);
  if (j == h.m) return "listing_0 (domestic)";
  return "listing_" + std::to_string(j - h.m);
}

std::string SplitTable(const FeatureSplit& s, const DatasetHeader& h) {
  std::vector<std::vector<std::string>> rows{{"feature", "index", "mean distance", "group"}};
  auto in = [](const std::vector<int>& v, int j) {
    return std::find(v.begin(), v.end(), j) != v.end();
  };
  for (int j = 0; j < s.feature_count; ++j) {
    const std::string group = in(s.country_idx, j)     ? "country"
                              : in(s.dependent_idx, j) ? "dependent"
                                                       : "invariant";
    rows.push_back({FeatureName(h, j), std::to_string(j),
                    in(s.country_idx, j) ? "-" : FormatFixed(s.mean_distance[j], 4), group});
  }
  std::string text = AlignedTable(rows);
  text += "metric " + std::string(DistanceMetricName(s.metric)) + ", threshold " +
          FormatFixed(s.threshold, 3) + ": " + std::to_string(s.dependent_idx.size()) +
          " dependent, " + std::to_string(s.invariant_idx.size()) + " invariant\n";
  for (int r : s.excluded_regions) {
    text += "warning: region " + std::to_string(r) + " excluded (too few samples)\n";
  }
  return text;
}

std::string TrainSummary(const TrainReport& r) {
  std::vector<std::vector<std::string>> rows{{"epoch", "train loss", "val loss", "val ndcg"}};
  for (const auto& e : r.epochs) {
    double tl = 0.0, vl = 0.0;
    for (double v : e.train_loss) tl += v;
    for (double v : e.val_loss) vl += v;
    rows.push_back({std::to_string(e.epoch + 1), FormatFixed(tl, 5),
                    e.val_loss.empty() ? "-" : FormatFixed(vl, 5), FormatFixed(e.val_ndcg, 5)});
  }
  std::string text = r.model + ": " + std::to_string(r.train_records) + " training records, " +
                     std::to_string(r.param_count) + " parameters\n" + AlignedTable(rows);
  text += "best epoch " + std::to_string(r.best_epoch + 1) + " (val ndcg " +
          FormatFixed(r.best_val_ndcg, 5) + ")" + (r.stopped_early ? ", stopped early" : "") +
          "\n";
  return text;
}

// Groups excluded by the split are the validation set used for reporting.
const char kSplitNote[] =
    "Evaluation groups are the query-hash validation split of the data file.\n";

}  // namespace

void CmdGenerate(const GlobalOptions& g, const GenerateFlags& f, std::ostream& out) {
  Json cfg = ResolveConfig(g, "generate", GeneratorConfig{});
  if (g.seed) cfg["seed"] = *g.seed;
  if (f.queries) cfg["queries"] = *f.queries;
  if (f.candidates) cfg["candidates"] = *f.candidates;
  const GeneratorConfig config = cfg.get<GeneratorConfig>();
  config.Validate();
  Manifest m(g, "generate", config, {"data.jsonl"});
  m.Run([&] {
    Dataset d;
    d.header = {config.user_dim(), config.listing_dim(), config.regions};
    d.groups = Generate(config);
    WriteJsonl(d, m.Path("data.jsonl"));
    out << "wrote " << d.groups.size() << " query groups (" << RecordCount(d.groups)
        << " records, m=" << d.header.m << ", p=" << d.header.p << ", R=" << d.header.regions
        << ") to " << m.Path("data.jsonl").string() << "\n";
  });
}

void CmdSplit(const GlobalOptions& g, const SplitFlags& f, std::ostream& out) {
  Json cfg = ResolveConfig(g, "split", Json{{"data", ""}, {"split", SplitOptions{}}});
  RejectUnknownKeys(cfg, {"data", "split"}, "split config");
  if (f.data) cfg["data"] = *f.data;
  if (f.threshold) cfg["split"]["threshold"] = *f.threshold;
  if (f.metric) cfg["split"]["metric"] = *f.metric;
  const auto options = cfg.at("split").get<SplitOptions>();
  cfg["split"] = options;
  Manifest m(g, "split", cfg, {"split.json"});
  m.Run([&] {
    const Dataset d = ReadData(cfg.at("data").get<std::string>());
    const FeatureSplit s = SplitFeatures(std::span<const QueryGroup>(d.groups),
                                         CountryIndices(d.header), options);
    WriteJson(m.Path("split.json"), Json{{"split", s}, {"layout", LayoutFromSplit(s)}});
    out << SplitTable(s, d.header);
  });
}

void CmdTrain(const GlobalOptions& g, const TrainFlags& f, std::ostream& out) {
  Json cfg = ResolveConfig(g, "train",
                           Json{{"data", ""},
                                {"model", DefaultModelChoice()},
                                {"train", TrainConfig{}},
                                {"split", SplitOptions{}},
                                {"init", ""}});
  RejectUnknownKeys(cfg, {"data", "model", "train", "split", "init"}, "train config");
  if (f.data) cfg["data"] = *f.data;
  if (f.init) cfg["init"] = *f.init;
  ApplyModelFlags(f.model, cfg["model"]);
  Json& t = cfg["train"];
  if (g.seed) t["seed"] = *g.seed;
  if (f.epochs) t["epochs"] = *f.epochs;
  if (f.batch_size) t["batch_size"] = *f.batch_size;
  if (f.lr) t["optimizer"]["learning_rate"] = *f.lr;
  if (f.optimizer) t["optimizer"]["kind"] = *f.optimizer;
  if (f.weights) t["task_weights"] = ParseNumberList<double>(*f.weights, "task weight");
  if (f.patience) t["patience"] = *f.patience;
  if (f.region) t["region"] = *f.region;
  if (f.val_fraction) t["val_fraction"] = *f.val_fraction;
  const TrainConfig train = t.get<TrainConfig>();
  const SplitOptions split_options = cfg.at("split").get<SplitOptions>();
  cfg["train"] = train;
  cfg["split"] = split_options;
  UncheckedSpec(cfg.at("model"));

  Manifest m(g, "train", cfg, {"model.ckpt", "train_report.json", "layout.json"});
  m.Run([&] {
    const Dataset d = ReadData(cfg.at("data").get<std::string>());
    const GroupSplit groups = SplitByQueryHash(d.groups, train.val_fraction);
    const std::string init = cfg.at("init").get<std::string>();
    std::unique_ptr<RankingModel> model;
    Json layout_doc;
    if (!init.empty()) {
      const Checkpoint ck = ReadCheckpoint(fs::path(init));
      const ModelSpec spec = SpecFromChoice(cfg.at("model"), ck.spec.layout, train.seed);
      model = LoadModel(ck, spec);
      layout_doc = Json{{"split", nullptr}, {"layout", ck.spec.layout}, {"init", init}};
    } else {
      const FeatureSplit s = SplitFeatures(std::span<const QueryGroup>(groups.train),
                                           CountryIndices(d.header), split_options);
      const ModelSpec spec = SpecFromChoice(cfg.at("model"), LayoutFromSplit(s), train.seed);
      model = BuildModel(spec);
      layout_doc = Json{{"split", s}, {"layout", spec.layout}};
    }
    if (model->spec().layout.input_dim != d.header.feature_dim()) {
      throw FormatError("model expects " + std::to_string(model->spec().layout.input_dim) +
                        " features but the data has " + std::to_string(d.header.feature_dim()));
    }
    WriteJson(m.Path("layout.json"), layout_doc);
    TrainReport report = Train(*model, groups.train, groups.val, train);
    report.checkpoint_path = "model.ckpt";
    SaveCheckpoint(*model, m.Path("model.ckpt"));
    WriteJson(m.Path("train_report.json"), report);
    out << TrainSummary(report) << "checkpoint " << m.Path("model.ckpt").string() << "\n";
  });
}

void CmdEval(const GlobalOptions& g, const EvalFlags& f, std::ostream& out) {
  Json cfg = ResolveConfig(g, "eval",
                           Json{{"data", ""},
                                {"models", Json::array()},
                                {"eval", EvalOptions{}},
                                {"groups", "val"},
                                {"val_fraction", TrainConfig{}.val_fraction}});
  RejectUnknownKeys(cfg, {"data", "models", "eval", "groups", "val_fraction"}, "eval config");
  if (f.data) cfg["data"] = *f.data;
  if (!f.checkpoints.empty()) {
    cfg["models"] = Json::array();
    for (const auto& c : f.checkpoints) {
      const auto eq = c.find('=');
      cfg["models"].push_back(
          eq == std::string::npos
              ? Json{{"name", nullptr}, {"checkpoint", c}}
              : Json{{"name", c.substr(0, eq)}, {"checkpoint", c.substr(eq + 1)}});
    }
  }
  if (f.depth) cfg["eval"]["depth"] = *f.depth;
  if (f.gain) cfg["eval"]["gain"] = *f.gain;
  if (f.top_n) cfg["eval"]["top_n"] = *f.top_n;
  if (f.groups) cfg["groups"] = *f.groups;
  const EvalOptions options = cfg.at("eval").get<EvalOptions>();
  cfg["eval"] = options;
  const std::string which = cfg.at("groups").get<std::string>();
  if (which != "val" && which != "all") throw UsageError("--groups must be 'val' or 'all'");
  if (cfg.at("models").empty()) throw UsageError("no checkpoints given (use --checkpoint)");

  Manifest m(g, "eval", cfg, {"ndcg.csv", "domestic.csv", "report.txt"});
  m.Run([&] {
    const Dataset d = ReadData(cfg.at("data").get<std::string>());
    std::vector<QueryGroup> groups =
        which == "all" ? d.groups
                       : SplitByQueryHash(d.groups, cfg.at("val_fraction").get<double>()).val;
    std::vector<std::unique_ptr<RankingModel>> models;
    std::vector<NamedModel> named;
    std::set<std::string> seen;
    for (auto& entry : cfg["models"]) {
      const std::string path = entry.at("checkpoint").get<std::string>();
      if (!fs::exists(path)) throw UsageError("checkpoint '" + path + "' does not exist");
      models.push_back(LoadCheckpoint(path));
      std::string name = entry.at("name").is_null() ? ModelName(models.back()->spec())
                                                    : entry.at("name").get<std::string>();
      if (!seen.insert(name).second) {
        throw UsageError("two checkpoints are named '" + name + "'; use name=path");
      }
      if (models.back()->spec().layout.input_dim != d.header.feature_dim()) {
        throw FormatError("checkpoint '" + path + "' does not match the data's feature count");
      }
      named.push_back({name, models.back().get()});
    }
    const EvaluationReport rep = EvaluateModels(named, groups, options);
    WriteStream(m.Path("ndcg.csv"), [&](std::ostream& o) { WriteNdcgCsv(rep.ndcg, o); });
    WriteStream(m.Path("domestic.csv"),
                [&](std::ostream& o) { WriteDomesticCsv(rep.domestic, o); });
    const std::string text =
        FormatReportTables(rep, "NDCG on " + std::to_string(groups.size()) + " query groups") +
        (which == "val" ? kSplitNote : "");
    WriteText(m.Path("report.txt"), text);
    out << text;
  });
}

void CmdCompare(const GlobalOptions& g, const CompareFlags& f, std::ostream& out) {
  Json model = DefaultModelChoice();
  model.erase("name");
  Json cfg = ResolveConfig(g, "compare",
                           Json{{"data", ""},
                                {"models", {"shared_bottom", "mlmmoe", "ple", "adatt_sp", "seq",
                                            "seq+md"}},
                                {"model", model},
                                {"train", TrainConfig{}},
                                {"split", SplitOptions{}},
                                {"eval", EvalOptions{}},
                                {"threads", 1}});
  RejectUnknownKeys(cfg, {"data", "models", "model", "train", "split", "eval", "threads"},
                    "compare config");
  if (f.data) cfg["data"] = *f.data;
  if (f.models) cfg["models"] = SplitList(*f.models);
  if (f.tasks) cfg["model"]["tasks"] = TaskNames(DefaultTasks(*f.tasks));
  if (g.seed) cfg["train"]["seed"] = *g.seed;
  if (f.epochs) cfg["train"]["epochs"] = *f.epochs;
  if (f.lr) cfg["train"]["optimizer"]["learning_rate"] = *f.lr;
  if (f.depth) cfg["eval"]["depth"] = *f.depth;
  if (f.threads) cfg["threads"] = *f.threads;
  const TrainConfig train = cfg.at("train").get<TrainConfig>();
  const SplitOptions split_options = cfg.at("split").get<SplitOptions>();
  const EvalOptions options = cfg.at("eval").get<EvalOptions>();
  cfg["train"] = train;
  cfg["split"] = split_options;
  cfg["eval"] = options;
  const auto names = cfg.at("models").get<std::vector<std::string>>();
  const int threads = cfg.at("threads").get<int>();
  if (threads < 1) throw UsageError("threads must be >= 1");
  if (std::find(names.begin(), names.end(), kBaselineModel) == names.end()) {
    throw ConfigError("compare needs shared_bottom among the models (it is the 0% reference)");
  }
  std::vector<std::string> artifacts{"ndcg.csv", "domestic.csv", "report.txt",
                                     "train_reports.json", "layout.json"};
  for (const auto& n : names) {
    if (std::count(names.begin(), names.end(), n) > 1) {
      throw UsageError("model '" + n + "' listed twice");
    }
    Json choice = cfg.at("model");
    choice["name"] = n;
    UncheckedSpec(choice);
    artifacts.push_back("models/" + n + ".ckpt");
  }

  Manifest m(g, "compare", cfg, artifacts);
  m.Run([&] {
    const Dataset d = ReadData(cfg.at("data").get<std::string>());
    const GroupSplit groups = SplitByQueryHash(d.groups, train.val_fraction);
    if (groups.val.empty()) throw ConfigError("validation split is empty; raise val_fraction");
    const FeatureSplit s = SplitFeatures(std::span<const QueryGroup>(groups.train),
                                         CountryIndices(d.header), split_options);
    const FeatureLayout layout = LayoutFromSplit(s);
    WriteJson(m.Path("layout.json"), Json{{"split", s}, {"layout", layout}});

    std::vector<ModelSpec> specs;
    for (const auto& n : names) {
      Json choice = cfg.at("model");
      choice["name"] = n;
      specs.push_back(SpecFromChoice(choice, layout, train.seed));
    }
    std::vector<TrainReport> reports(names.size());
    std::vector<std::vector<Tensor>> scores(names.size());
    std::vector<std::vector<Task>> tasks(names.size());
    ParallelFor(names.size(), threads, [&](std::size_t i) {
      auto model = BuildModel(specs[i]);
      reports[i] = Train(*model, groups.train, groups.val, train);
      // Relative to the output directory.
      reports[i].checkpoint_path = "models/" + names[i] + ".ckpt";
      fs::create_directories(m.Path("models"));
      SaveCheckpoint(*model, m.Path(reports[i].checkpoint_path));
      scores[i] = ScoreGroups(*model, groups.val);
      tasks[i] = model->tasks();
    });
    const EvaluationReport rep = EvaluateScores(names, tasks, scores, groups.val, options);
    WriteStream(m.Path("ndcg.csv"), [&](std::ostream& o) { WriteNdcgCsv(rep.ndcg, o); });
    WriteStream(m.Path("domestic.csv"),
                [&](std::ostream& o) { WriteDomesticCsv(rep.domestic, o); });
    WriteJson(m.Path("train_reports.json"), reports);
    const std::string text =
        FormatReportTables(rep, "Model comparison on " + std::to_string(groups.val.size()) +
                                    " validation query groups") +
        kSplitNote;
    WriteText(m.Path("report.txt"), text);
    out << text;
  });
}

void CmdExperiment(const GlobalOptions& g, const ExperimentFlags& f, std::ostream& out) {
  Json cfg = ResolveConfig(g, "experiment",
                           Json{{"name", nullptr}, {"experiment", ExperimentConfig{}}});
  RejectUnknownKeys(cfg, {"name", "experiment"}, "experiment config");
  if (f.name) cfg["name"] = *f.name;
  if (cfg.at("name").is_null()) throw UsageError("no experiment name given");
  const ExperimentKind kind = ParseExperiment(cfg.at("name").get<std::string>());
  Json& e = cfg["experiment"];
  if (g.seed) e["seeds"] = {*g.seed};
  if (f.seeds) e["seeds"] = ParseNumberList<std::uint64_t>(*f.seeds, "seed");
  if (f.threads) e["threads"] = *f.threads;
  if (f.epochs) e["train"]["epochs"] = *f.epochs;
  if (f.queries) e["data"]["queries"] = *f.queries;
  if (f.test_queries) e["test_queries"] = *f.test_queries;
  const ExperimentConfig config = e.get<ExperimentConfig>();
  config.data.Validate();
  e = config;

  Manifest m(g, "experiment", cfg,
             {"rows.csv", "summary.csv", "report.txt", "train_reports.json"});
  m.Run([&] {
    const ExperimentResult r = RunExperiment(kind, config);
    WriteStream(m.Path("rows.csv"), [&](std::ostream& o) { WriteExperimentCsv(r, o); });
    WriteStream(m.Path("summary.csv"), [&](std::ostream& o) { WriteSummaryCsv(r, o); });
    WriteJson(m.Path("train_reports.json"), r.train_reports);
    const std::string text = FormatExperimentReport(r, config);
    WriteText(m.Path("report.txt"), text);
    out << text;
  });
}

void CmdParams(const GlobalOptions& g, const ParamsFlags& f, std::ostream& out) {
  Json model = DefaultModelChoice();
  model.erase("name");
  model.erase("tasks");
  Json cfg = ResolveConfig(g, "params",
                           Json{{"models", {"all"}},
                                {"tasks", {2, 3}},
                                {"data", GeneratorConfig{}},
                                {"model", model}});
  RejectUnknownKeys(cfg, {"models", "tasks", "data", "model"}, "params config");
  if (f.model) cfg["models"] = SplitList(*f.model);
  if (f.tasks) cfg["tasks"] = ParseNumberList<int>(*f.tasks, "task count");
  std::vector<std::string> names;
  for (const auto& n : cfg.at("models").get<std::vector<std::string>>()) {
    if (n == "all") {
      for (const auto& v : ValidModelNames()) names.push_back(v);
    } else {
      names.push_back(n);
    }
  }
  const auto counts = cfg.at("tasks").get<std::vector<int>>();
  for (int k : counts) {
    if (k != 2 && k != 3) throw UsageError("task counts must be 2 or 3, got " + std::to_string(k));
  }
  const GeneratorConfig data = cfg.at("data").get<GeneratorConfig>();
  data.Validate();
  cfg["data"] = data;
  const FeatureLayout layout = PlantedLayout(data);
  std::vector<std::vector<ParamTable>> tables;
  for (const auto& n : names) {
    tables.emplace_back();
    for (int k : counts) {
      Json choice = cfg.at("model");
      choice["name"] = n;
      choice["tasks"] = TaskNames(DefaultTasks(k));
      tables.back().push_back(CountParams(SpecFromChoice(choice, layout, 0)));
    }
  }

  Manifest m(g, "params", cfg, {"params.txt", "params.json"});
  m.Run([&] {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header{"model"};
    for (int k : counts) header.push_back(std::to_string(k) + " tasks");
    for (std::size_t i = 1; i < counts.size(); ++i) {
      header.push_back("growth " + std::to_string(counts[i - 1]) + "->" +
                       std::to_string(counts[i]));
    }
    rows.push_back(header);
    Json doc = Json::array();
    std::string detail;
    for (std::size_t m_i = 0; m_i < names.size(); ++m_i) {
      std::vector<std::string> row{names[m_i]};
      Json entry{{"model", names[m_i]}, {"counts", Json::object()}, {"growth_pct", Json::object()}};
      for (std::size_t i = 0; i < counts.size(); ++i) {
        row.push_back(std::to_string(tables[m_i][i].total));
        entry["counts"][std::to_string(counts[i])] = tables[m_i][i].total;
        entry["tables"].push_back(tables[m_i][i]);
        detail += names[m_i] + ", " + std::to_string(counts[i]) + " tasks\n" +
                  FormatParamTable(tables[m_i][i]) + "\n";
      }
      for (std::size_t i = 1; i < counts.size(); ++i) {
        const double growth = GrowthPercent(tables[m_i][i - 1].total, tables[m_i][i].total);
        row.push_back(FormatFixed(growth, 1) + "%");
        entry["growth_pct"][std::to_string(counts[i - 1]) + "->" + std::to_string(counts[i])] =
            growth;
      }
      rows.push_back(row);
      doc.push_back(entry);
    }
    const std::string text = AlignedTable(rows) + "\n" + detail;
    WriteText(m.Path("params.txt"), text);
    WriteJson(m.Path("params.json"), doc);
    out << AlignedTable(rows);
  });
}

}  // namespace seqmd::cli
