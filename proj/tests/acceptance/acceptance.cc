// Acceptance suite: one PASS/FAIL line per criterion.
//
//   seqmd_acceptance [--only 1,3] [--known-red 5] [--report FILE] [--work DIR]
//
// Criteria listed in --known-red still print FAIL but do not set the exit code.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli.h"
#include "seqmd/datasets/feature_split.h"
#include "seqmd/datasets/generator.h"
#include "seqmd/evaluation/ndcg.h"
#include "seqmd/models/checkpoint.h"
#include "seqmd/models/factory.h"
#include "seqmd/models/param_count.h"
#include "seqmd/random.h"
#include "seqmd/tensorcore/grad_check.h"
#include "seqmd/tensorcore/ops.h"
#include "seqmd/training/experiments.h"
#include "seqmd/training/loss.h"
#include "support/fixtures.h"
#include "support/oracles.h"

namespace seqmd {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double SecondsSince(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string Num(double v, int precision = 3) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(precision);
  s << v;
  return s.str();
}

std::string Sci(double v) {
  std::ostringstream s;
  s.setf(std::ios::scientific);
  s.precision(2);
  s << v;
  return s.str();
}

GradCheckReport GradCheckModel(const std::string& name, std::uint64_t seed) {
  const ModelSpec spec = testing::SmallSpec(name, 3, seed);
  auto model = BuildModel(spec);
  testing::Jitter(*model, 0.1, seed + 1);
  const FeatureBatch batch = testing::RandomBatch(testing::SmallLayout(), 16, seed + 2);
  const std::vector<double> w(spec.tasks.size(), 1.0);
  LossFn loss = [&](Tape& tape) {
    return MultitaskLoss(tape, model->Forward(tape, batch), batch.labels, spec.tasks, w).total;
  };
  return CheckGradients(loss, model->params().All());
}

Outcome GradientCorrectness() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  std::string worst_model;
  bool ok = true;
  for (const char* name : {"shared_bottom", "mlmmoe", "ple", "adatt_sp", "seq", "seq+md"}) {
    const GradCheckReport r = GradCheckModel(name, 11);
    ok = ok && r.passed();
    if (r.max_rel_err >= worst) {
      worst = r.max_rel_err;
      worst_model = std::string(name) + ":" + r.worst_param;
    }
  }
  const double secs = SecondsSince(t0);
  return {ok && secs < 120.0, "6 models, max rel err " + Sci(worst) + " (" + worst_model +
                                  "), " + Num(secs, 1) + " s"};
}

Outcome Monotonicity() {
  const GeneratorConfig gen;
  const FeatureLayout layout = PlantedLayout(gen);
  constexpr std::size_t kInputs = 10000;
  std::size_t violations = 0, checked = 0;
  double max_err = 0.0;
  int configs = 0;
  for (const char* name : {"seq", "seq+md", "seq+md_plug"}) {
    for (int k : {2, 3}) {
      ModelSpec spec;
      ApplyModelName(name, spec);
      spec.tasks = DefaultTasks(k);
      spec.layout = layout;
      spec.seed = 100 + configs;
      auto model = BuildModel(spec);
      // Near-saturating weights.
      testing::Jitter(*model, 0.5, 200 + configs);
      ++configs;
      Rng rng(DeriveSeed(7, name) + k);
      Tensor x({kInputs, static_cast<std::size_t>(layout.input_dim)});
      for (double& v : x.data()) v = 3.0 * rng.Normal();
      for (const TaskScores& s : Predict(*model, MakeBatch(x, layout))) {
        const auto expect = oracle::DescendingProbs(s.logits);
        for (std::size_t i = 0; i < s.probs.size(); ++i) {
          if (i > 0 && s.probs[i] > s.probs[i - 1]) ++violations;
          max_err = std::max(max_err, std::abs(s.probs[i] - expect[i]));
        }
        ++checked;
      }
    }
  }
  return {violations == 0 && max_err <= 1e-12,
          std::to_string(configs) + " configs x " + std::to_string(kInputs) + " inputs (" +
              std::to_string(checked) + " rows), " + std::to_string(violations) +
              " order violations, max |p - cumprod| " + Sci(max_err)};
}

Outcome NdcgOracleEquivalence() {
  Rng rng(2024);
  std::size_t mismatched = 0, compared = 0, excluded = 0;
  double max_diff = 0.0;
  for (int g = 0; g < 1000; ++g) {
    QueryGroup group;
    group.query_id = "q" + std::to_string(g);
    const std::size_t n = 1 + rng.UniformInt(6);
    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i) {
      InteractionRecord r;
      r.labels.click = rng.Bernoulli(0.5);
      r.labels.cart = r.labels.click && rng.Bernoulli(0.5);
      r.labels.purchase = r.labels.cart && rng.Bernoulli(0.5);
      group.records.push_back(r);
      // Coarse scores; many ties.
      scores[i] = static_cast<double>(rng.UniformInt(4));
    }
    for (Task t : DefaultTasks(3)) {
      for (GainKind kind : {GainKind::kBinary, GainKind::kGraded}) {
        for (int depth : {3, kDefaultNdcgDepth}) {
          const auto a = NdcgForTask(group, scores, t, depth, kind);
          const auto b = NdcgOracle(group, scores, t, depth, kind);
          if (a.has_value() != b.has_value()) {
            ++mismatched;
          } else if (a) {
            const double d = std::abs(*a - *b);
            max_diff = std::max(max_diff, d);
            if (d > 1e-12) ++mismatched;
            ++compared;
          } else {
            ++excluded;
          }
        }
      }
    }
  }
  return {mismatched == 0, "1000 groups (size <= 6), " + std::to_string(compared) +
                               " comparisons, " + std::to_string(excluded) +
                               " excluded by both, max diff " + Sci(max_diff)};
}

Outcome PlantedShiftRecovery() {
  int exact = 0;
  std::string misses;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GeneratorConfig g;
    g.seed = seed;
    g.regions = 4;
    g.region_weights = {0.25, 0.25, 0.25, 0.25};
    g.shift_strength = {2.0, 2.0, 2.0, 2.0};
    g.shifted_user_features = {0, 1, 2, 3};
    g.shifted_listing_features = {1};
    g.domestic_share = {0.4, 0.4, 0.4, 0.4};
    // About 1000 records per region.
    g.candidates = 2;
    g.queries = 2000;
    const auto groups = Generate(g);
    SplitOptions opt;
    opt.threshold = 0.1;
    const FeatureSplit s =
        SplitFeatures(std::span<const QueryGroup>(groups), CountryFeatureIndices(g), opt);
    if (s.dependent_idx == PlantedDependentFeatures(g)) {
      ++exact;
    } else {
      misses += " " + std::to_string(seed);
    }
  }
  return {exact >= 19, std::to_string(exact) + "/20 seeds recover the 5 planted features" +
                           (misses.empty() ? "" : "; missed seeds:" + misses)};
}

ExperimentConfig DirectionalConfig() {
  ExperimentConfig c;
  c.seeds = {0, 1, 2, 3, 4};
  c.train.epochs = 15;
  c.train.patience = 0;
  c.train.optimizer.learning_rate = 3e-3;
  c.train.val_fraction = 0.2;
  c.test_queries = 5000;
  c.arms = {"shared_bottom", "seq", "seq+md"};
  return c;
}

Outcome DirectionalBenchmark(const fs::path& work) {
  const auto t0 = Clock::now();
  const ExperimentConfig c = DirectionalConfig();
  const ExperimentResult r = RunExperiment(ExperimentKind::kCompare, c);
  const double secs = SecondsSince(t0);
  fs::create_directories(work);
  {
    std::ofstream rows(work / "directional_rows.csv");
    WriteExperimentCsv(r, rows);
    std::ofstream text(work / "directional_report.txt");
    text << FormatExperimentReport(r, c);
  }
  // Paired per-seed deltas.
  auto value = [&](const std::string& arm, std::uint64_t seed) {
    for (const ExperimentRow& row : r.rows) {
      if (row.arm == arm && row.seed == seed && row.metric == "purchase" && row.region == "all") {
        return row.value;
      }
    }
    throw Error("missing row for " + arm);
  };
  double md_vs_sb = 0.0, md_vs_seq = 0.0, seq_vs_sb = 0.0;
  std::string per_seed;
  for (std::uint64_t s : c.seeds) {
    const double sb = value("shared_bottom", s), seq = value("seq", s), md = value("seq+md", s);
    md_vs_sb += 100.0 * (md - sb) / sb;
    md_vs_seq += md - seq;
    seq_vs_sb += 100.0 * (seq - sb) / sb;
    per_seed += " " + Num(100.0 * (md - sb) / sb, 2);
  }
  md_vs_sb /= static_cast<double>(c.seeds.size());
  md_vs_seq /= static_cast<double>(c.seeds.size());
  seq_vs_sb /= static_cast<double>(c.seeds.size());
  const std::size_t records = static_cast<std::size_t>(c.data.queries) * c.data.candidates;
  return {md_vs_sb > 0.0 && md_vs_seq >= 0.0 && secs < 1800.0,
          std::to_string(records) + " records x 5 seeds; purchase NDCG seq+md vs shared_bottom " +
              (md_vs_sb >= 0 ? "+" : "") + Num(md_vs_sb, 3) + "% (per seed:" + per_seed +
              "), seq vs shared_bottom " + (seq_vs_sb >= 0 ? "+" : "") + Num(seq_vs_sb, 3) +
              "%, seq+md - seq " + (md_vs_seq >= 0 ? "+" : "") + Num(md_vs_seq, 5) + ", " +
              Num(secs, 0) + " s"};
}

Outcome ParameterGrowth(std::ostream& log) {
  const GeneratorConfig gen;
  bool ok = true;
  std::string detail;
  for (const char* name : {"shared_bottom", "mlmmoe", "ple", "adatt_sp", "seq", "seq+md"}) {
    ModelSpec spec;
    ApplyModelName(name, spec);
    spec.layout = PlantedLayout(gen);
    spec.tasks = DefaultTasks(2);
    const std::size_t two = CountParams(spec).total;
    spec.tasks = DefaultTasks(3);
    const std::size_t three = CountParams(spec).total;
    const double growth = GrowthPercent(two, three);
    const bool seq = spec.architecture == Architecture::kSeq;
    const bool this_ok = seq ? growth < 10.0 : growth >= 25.0;
    ok = ok && this_ok;
    log << "    " << name << ": " << two << " -> " << three << " (+" << Num(growth, 2) << "%, "
        << (seq ? "< 10%" : ">= 25%") << (this_ok ? " ok" : " VIOLATED") << ")\n";
    detail += std::string(detail.empty() ? "" : ", ") + name + " " + std::to_string(two) + "->" +
              std::to_string(three);
  }
  return {ok, detail};
}

Outcome TransferInvariance() {
  const GeneratorConfig gen;
  const FeatureLayout layout = PlantedLayout(gen);
  std::size_t rows = 0, mismatched = 0;
  for (const char* name : {"seq", "seq+md"}) {
    ModelSpec source;
    ApplyModelName(name, source);
    source.layout = layout;
    source.tasks = DefaultTasks(2);
    source.seed = 5;
    auto two = BuildModel(source);
    testing::Jitter(*two, 0.05, 6);
    std::stringstream bytes;
    WriteCheckpoint(Snapshot(*two), bytes);
    ModelSpec target = source;
    target.tasks = DefaultTasks(3);
    target.seed = 9;
    auto three = LoadModel(ReadCheckpoint(bytes), target);

    Rng rng(77);
    Tensor x({1000, static_cast<std::size_t>(layout.input_dim)});
    for (double& v : x.data()) v = 2.0 * rng.Normal();
    const FeatureBatch batch = MakeBatch(x, layout);
    const auto a = Predict(*two, batch);
    const auto b = Predict(*three, batch);
    const int ca = two->TaskColumn(Task::kClick), cb = three->TaskColumn(Task::kClick);
    for (std::size_t i = 0; i < a.size(); ++i) {
      // Bitwise: +0 and -0 count as different.
      const double u = a[i].logits[ca], v = b[i].logits[cb];
      if (std::memcmp(&u, &v, sizeof u) != 0) ++mismatched;
      ++rows;
    }
  }
  return {mismatched == 0, "seq and seq+md, 2 -> 3 tasks via checkpoint bytes: " +
                               std::to_string(rows - mismatched) + "/" + std::to_string(rows) +
                               " click logits bit-identical"};
}

Outcome PlugAndPlay() {
  const GeneratorConfig gen;
  const FeatureLayout layout = PlantedLayout(gen);
  bool ok = true;
  std::string detail;
  for (const char* base : {"shared_bottom", "mlmmoe", "ple", "adatt_sp"}) {
    const std::string wrapped = std::string(base) + "+md";
    ModelSpec plain_spec, md_spec;
    ApplyModelName(base, plain_spec);
    ApplyModelName(wrapped, md_spec);
    plain_spec.layout = md_spec.layout = layout;
    auto plain = BuildModel(plain_spec);
    auto md = BuildModel(md_spec);
    const FeatureBatch batch = testing::RandomBatch(layout, 32, 3);
    Tape tape;
    const ModelOutput po = plain->Forward(tape, batch);
    const ModelOutput mo = md->Forward(tape, batch);
    const bool shapes = po.probs.value().shape() == mo.probs.value().shape() &&
                        po.logits.value().shape() == mo.logits.value().shape();
    const bool grew = md->params().TotalSize() > plain->params().TotalSize();
    const GradCheckReport g = GradCheckModel(wrapped, 31);
    ok = ok && shapes && grew && g.passed();
    detail += std::string(detail.empty() ? "" : ", ") + wrapped + " " +
              ShapeToString(mo.probs.value().shape()) + (shapes ? "" : " SHAPE MISMATCH") +
              " grad " + Sci(g.max_rel_err);
  }
  return {ok, detail};
}

int Cli(std::vector<std::string> args, std::string* output = nullptr) {
  args.insert(args.begin(), "seqmd");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (output) *output = out.str() + err.str();
  return code;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome Determinism(const fs::path& work) {
  const fs::path dir = work / "determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string data = (dir / "data").string();
  std::string log;
  if (Cli({"--seed", "3", "--out", data, "generate", "--queries", "400", "--candidates", "10"},
          &log) != 0) {
    return {false, "generate failed: " + log};
  }
  const std::string a = (dir / "run_a").string(), b = (dir / "run_b").string();
  if (Cli({"--seed", "1", "--out", a, "compare", "--data", data + "/data.jsonl", "--models",
           "shared_bottom,ple+md,seq,seq+md", "--epochs", "2", "--threads", "2"},
          &log) != 0) {
    return {false, "first compare failed: " + log};
  }
  if (Cli({"--config", a + "/manifest.json", "--out", b, "compare"}, &log) != 0) {
    return {false, "compare from manifest failed: " + log};
  }
  std::vector<std::string> files = {"ndcg.csv", "domestic.csv", "report.txt",
                                    "train_reports.json", "layout.json"};
  for (const auto& e : fs::directory_iterator(fs::path(a) / "models")) {
    files.push_back("models/" + e.path().filename().string());
  }
  std::string differing;
  for (const auto& f : files) {
    const std::string x = Slurp(fs::path(a) / f), y = Slurp(fs::path(b) / f);
    if (x.empty() || x != y) differing += " " + f;
  }
  return {differing.empty(), differing.empty()
                                 ? std::to_string(files.size()) +
                                       " report files byte-identical across two runs"
                                 : "differing or empty:" + differing};
}

struct Criterion {
  int id;
  std::string name;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace seqmd

int main(int argc, char** argv) {
  using namespace seqmd;
  CLI::App app{"seqmd acceptance suite"};
  std::vector<int> only;
  std::string report_path;
  std::string work = (fs::temp_directory_path() / "seqmd_acceptance").string();
  app.add_option("--only", only, "Criteria to run (default: all)")->delimiter(',');
  std::vector<int> known_red;
  app.add_option("--known-red", known_red, "Criteria whose failure is not fatal")
      ->delimiter(',');
  app.add_option("--report", report_path, "Also write the PASS/FAIL lines to this file");
  app.add_option("--work", work, "Scratch directory")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  std::ostringstream details;
  const std::vector<Criterion> criteria = {
      {1, "gradient correctness", GradientCorrectness},
      {2, "descending probabilities", Monotonicity},
      {3, "NDCG oracle equivalence", NdcgOracleEquivalence},
      {4, "planted shift recovery", PlantedShiftRecovery},
      {5, "directional synthetic benchmark", [&] { return DirectionalBenchmark(work); }},
      {6, "parameter growth", [&] { return ParameterGrowth(details); }},
      {7, "transfer zero-shot invariance", TransferInvariance},
      {8, "plug-and-play matrix", PlugAndPlay},
      {9, "determinism", [&] { return Determinism(work); }},
  };

  std::ostringstream lines;
  int passed = 0, run = 0, fatal = 0;
  std::string red;
  for (const Criterion& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    ++run;
    if (o.pass) {
      ++passed;
    } else {
      red += " " + std::to_string(c.id);
      if (std::find(known_red.begin(), known_red.end(), c.id) == known_red.end()) ++fatal;
    }
    const std::string line = std::string(o.pass ? "PASS" : "FAIL") + " [" +
                             std::to_string(c.id) + "] " + c.name + ": " + o.detail;
    std::cout << line << "\n" << details.str() << std::flush;
    lines << line << "\n" << details.str();
    details.str("");
  }
  const std::string summary = std::to_string(passed) + "/" + std::to_string(run) + " passed" +
                              (red.empty() ? "" : "; failing:" + red) +
                              (fatal == 0 && !red.empty() ? " (all listed as known red)" : "");
  std::cout << summary << "\n";
  lines << summary << "\n";
  if (!report_path.empty()) std::ofstream(report_path) << lines.str();
  return fatal == 0 ? 0 : 1;
}
