#include "cli.h"

#include <ostream>

#include "CLI11.hpp"
#include "commands.h"

namespace seqmd::cli {
namespace {

void AddModelFlags(CLI::App* cmd, ModelFlags& f) {
  cmd->add_option("--model", f.model, "Model name, e.g. seq+md, ple, ple+md");
  cmd->add_option("--md", f.md, "MD placement: none, input_plug, in_sequence");
  cmd->add_option("--tasks", f.tasks, "Task count (2, 3) or list such as click,purchase");
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-task search ranking: data generation, training, evaluation and "
               "experiments.",
               "seqmd"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", ToolVersion());

  GlobalOptions g;
  std::string out_dir = g.out.string();
  app.add_option("--seed", g.seed, "Seed for data, initialization and shuffling");
  app.add_option("--config", g.config, "JSON config file, or a manifest.json to re-run");
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_flag("--force", g.force, "Overwrite existing outputs");

  GenerateFlags gen;
  auto* generate = app.add_subcommand("generate", "Write a synthetic dataset (data.jsonl)");
  generate->add_option("--queries", gen.queries, "Number of query groups");
  generate->add_option("--candidates", gen.candidates, "Candidates per query group");

  SplitFlags spl;
  auto* split = app.add_subcommand("split", "Classify features as country/dependent/invariant");
  split->add_option("--data", spl.data, "Dataset file");
  split->add_option("--threshold", spl.threshold, "Mean pairwise distance threshold");
  split->add_option("--metric", spl.metric, "ks or wasserstein");

  TrainFlags tr;
  auto* train = app.add_subcommand("train", "Train one model and save a checkpoint");
  train->add_option("--data", tr.data, "Dataset file");
  AddModelFlags(train, tr.model);
  train->add_option("--epochs", tr.epochs);
  train->add_option("--batch-size", tr.batch_size);
  train->add_option("--lr", tr.lr, "Learning rate");
  train->add_option("--optimizer", tr.optimizer, "adam or sgd");
  train->add_option("--weights", tr.weights, "Per-task loss weights, e.g. 1,1,2");
  train->add_option("--patience", tr.patience, "Early-stop patience in epochs (0 = off)");
  train->add_option("--region", tr.region, "Train on one buyer region only");
  train->add_option("--val-fraction", tr.val_fraction);
  train->add_option("--init", tr.init, "Start from a checkpoint (adds a task if needed)");

  EvalFlags ev;
  auto* eval = app.add_subcommand("eval", "Evaluate checkpoints against shared_bottom");
  eval->add_option("--data", ev.data, "Dataset file");
  eval->add_option("--checkpoint", ev.checkpoints, "Checkpoint path or name=path (repeat)");
  eval->add_option("--depth", ev.depth, "NDCG truncation depth");
  eval->add_option("--gain", ev.gain, "binary or graded");
  eval->add_option("--top-n", ev.top_n, "Cut-off for the domestic share");
  eval->add_option("--groups", ev.groups, "val (hash split) or all");

  CompareFlags cmp;
  auto* compare = app.add_subcommand("compare", "Train several models and compare them");
  compare->add_option("--data", cmp.data, "Dataset file");
  compare->add_option("--models", cmp.models, "Comma-separated model names");
  compare->add_option("--tasks", cmp.tasks, "Task count (2 or 3)");
  compare->add_option("--epochs", cmp.epochs);
  compare->add_option("--lr", cmp.lr, "Learning rate");
  compare->add_option("--depth", cmp.depth, "NDCG truncation depth");
  compare->add_option("--threads", cmp.threads, "Models trained concurrently");

  ExperimentFlags ex;
  auto* experiment = app.add_subcommand("experiment", "Run a multi-seed experiment");
  experiment->add_option("name", ex.name,
                         "regularizer_ablation, transfer_2to3, single_vs_all_region, "
                         "md_plugplay or compare");
  experiment->add_option("--seeds", ex.seeds, "Comma-separated seeds");
  experiment->add_option("--threads", ex.threads, "Seeds run concurrently");
  experiment->add_option("--epochs", ex.epochs);
  experiment->add_option("--queries", ex.queries, "Query groups generated per seed");
  experiment->add_option("--test-queries", ex.test_queries,
                         "Held-out query groups used for scoring (0 = validation split)");

  ParamsFlags par;
  auto* params = app.add_subcommand("params", "Print parameter counts and task growth");
  params->add_option("--model", par.model, "Model name, comma list, or all");
  params->add_option("--tasks", par.tasks, "Task counts, e.g. 2,3");

  for (int i = 0; i < argc; ++i) g.argv.emplace_back(argv[i]);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }
  g.out = out_dir;

  try {
    if (generate->parsed()) CmdGenerate(g, gen, out);
    if (split->parsed()) CmdSplit(g, spl, out);
    if (train->parsed()) CmdTrain(g, tr, out);
    if (eval->parsed()) CmdEval(g, ev, out);
    if (compare->parsed()) CmdCompare(g, cmp, out);
    if (experiment->parsed()) CmdExperiment(g, ex, out);
    if (params->parsed()) CmdParams(g, par, out);
  } catch (const UsageError& e) {
    err << "seqmd: error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "seqmd: error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Json::exception& e) {
    err << "seqmd: error: bad config value: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "seqmd: error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace seqmd::cli
