#include "seqmd/training/trainer.h"

#include <chrono>
#include <cmath>

#include "seqmd/evaluation/scoring.h"
#include "seqmd/random.h"
#include "seqmd/training/loss.h"

namespace seqmd {
namespace {

std::vector<const InteractionRecord*> Flatten(std::span<const QueryGroup> groups) {
  std::vector<const InteractionRecord*> out;
  for (const auto& g : groups) {
    for (const auto& r : g.records) out.push_back(&r);
  }
  return out;
}

std::vector<QueryGroup> FilterRegion(std::span<const QueryGroup> groups,
                                     const std::optional<int>& region) {
  std::vector<QueryGroup> out;
  for (const auto& g : groups) {
    if (!region || g.region == *region) out.push_back(g);
  }
  return out;
}

void Shuffle(std::vector<std::size_t>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = rng.UniformInt(i);
    std::swap(v[i - 1], v[j]);
  }
}

bool AllFinite(const std::vector<double>& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace

void TrainConfig::Validate() const {
  if (epochs < 0) throw ConfigError("epochs must be >= 0");
  if (batch_size < 1) throw ConfigError("batch size must be >= 1");
  if (patience < 0) throw ConfigError("patience must be >= 0");
  if (!(val_fraction >= 0.0 && val_fraction < 1.0)) {
    throw ConfigError("validation fraction must lie in [0, 1)");
  }
  if (eval_depth < 1) throw ConfigError("evaluation depth must be >= 1");
  optimizer.Validate();
  if (!task_weights.empty()) ResolveTaskWeights(task_weights, task_weights.size());
}

void to_json(Json& j, const TrainConfig& c) {
  j = Json::object();
  j["seed"] = c.seed;
  j["epochs"] = c.epochs;
  j["batch_size"] = c.batch_size;
  j["optimizer"] = c.optimizer;
  j["task_weights"] = c.task_weights;
  j["patience"] = c.patience;
  j["region"] = c.region ? Json(*c.region) : Json(nullptr);
  j["val_fraction"] = c.val_fraction;
  j["eval_depth"] = c.eval_depth;
}

void from_json(const Json& j, TrainConfig& c) {
  RejectUnknownKeys(j,
                    {"seed", "epochs", "batch_size", "optimizer", "task_weights", "patience",
                     "region", "val_fraction", "eval_depth"},
                    "train config");
  ReadOptional(j, "seed", c.seed);
  ReadOptional(j, "epochs", c.epochs);
  ReadOptional(j, "batch_size", c.batch_size);
  if (j.contains("optimizer")) c.optimizer = j.at("optimizer").get<OptimizerConfig>();
  ReadOptional(j, "task_weights", c.task_weights);
  ReadOptional(j, "patience", c.patience);
  if (j.contains("region")) {
    if (j.at("region").is_null()) {
      c.region.reset();
    } else {
      int r = 0;
      ReadOptional(j, "region", r);
      c.region = r;
    }
  }
  ReadOptional(j, "val_fraction", c.val_fraction);
  ReadOptional(j, "eval_depth", c.eval_depth);
  c.Validate();
}

bool TrainReport::operator==(const TrainReport& o) const {
  return model == o.model && tasks == o.tasks && epochs == o.epochs &&
         best_epoch == o.best_epoch && best_val_ndcg == o.best_val_ndcg &&
         stopped_early == o.stopped_early && train_groups == o.train_groups &&
         val_groups == o.val_groups && train_records == o.train_records &&
         param_count == o.param_count && checkpoint_path == o.checkpoint_path;
}

void to_json(Json& j, const TrainReport& r) {
  j = Json::object();
  j["model"] = r.model;
  j["tasks"] = r.tasks;
  Json epochs = Json::array();
  for (const auto& e : r.epochs) {
    epochs.push_back({{"epoch", e.epoch},
                      {"train_loss", e.train_loss},
                      {"val_loss", e.val_loss},
                      {"val_ndcg", e.val_ndcg}});
  }
  j["epochs"] = std::move(epochs);
  j["best_epoch"] = r.best_epoch;
  j["best_val_ndcg"] = r.best_val_ndcg;
  j["stopped_early"] = r.stopped_early;
  j["train_groups"] = r.train_groups;
  j["val_groups"] = r.val_groups;
  j["train_records"] = r.train_records;
  j["param_count"] = r.param_count;
  j["checkpoint_path"] = r.checkpoint_path;
}

bool IsValidationGroup(const std::string& query_id, double fraction) {
  return static_cast<double>(HashString(query_id) % 10000) < fraction * 10000.0;
}

GroupSplit SplitByQueryHash(std::span<const QueryGroup> groups, double fraction) {
  GroupSplit s;
  for (const auto& g : groups) {
    (IsValidationGroup(g.query_id, fraction) ? s.val : s.train).push_back(g);
  }
  return s;
}

std::vector<double> EvaluateLoss(const RankingModel& model, std::span<const QueryGroup> groups,
                                 std::span<const double> weights) {
  std::vector<double> total(model.task_count(), 0.0);
  const auto recs = Flatten(groups);
  if (recs.empty()) return total;
  constexpr std::size_t kChunk = 4096;
  for (std::size_t begin = 0; begin < recs.size(); begin += kChunk) {
    const std::size_t end = std::min(recs.size(), begin + kChunk);
    std::span<const InteractionRecord* const> part(recs.data() + begin, end - begin);
    FeatureBatch batch = MakeBatch(part, model.spec().layout);
    Tape tape;
    LossTerms terms =
        MultitaskLoss(tape, model.Forward(tape, batch), batch.labels, model.tasks(), weights);
    for (std::size_t t = 0; t < total.size(); ++t) {
      total[t] += terms.per_task[t] * static_cast<double>(end - begin);
    }
  }
  for (double& v : total) v /= static_cast<double>(recs.size());
  return total;
}

TrainReport Train(RankingModel& model, std::span<const QueryGroup> train_groups,
                  std::span<const QueryGroup> val_groups, const TrainConfig& config) {
  config.Validate();
  const auto start = std::chrono::steady_clock::now();
  const std::vector<QueryGroup> train = FilterRegion(train_groups, config.region);
  const std::vector<QueryGroup> val = FilterRegion(val_groups, config.region);
  const auto records = Flatten(train);
  if (records.empty()) throw ConfigError("no training records after filtering");
  const std::vector<double> weights = ResolveTaskWeights(config.task_weights, model.task_count());

  TrainReport report;
  report.model = ModelName(model.spec());
  for (Task t : model.tasks()) report.tasks.emplace_back(TaskName(t));
  report.train_groups = train.size();
  report.val_groups = val.size();
  report.train_records = records.size();
  report.param_count = model.params().TotalSize();

  auto optimizer = MakeOptimizer(config.optimizer);
  const std::vector<Parameter*> params = model.params().All();
  const std::size_t rank_col = RankingColumn(model, Task::kPurchase);
  const Task rank_task = model.tasks()[rank_col];

  std::vector<Tensor> best_values;
  auto snapshot = [&] {
    best_values.clear();
    for (const Parameter* p : params) best_values.push_back(p->value);
  };
  snapshot();
  int since_best = 0;

  std::vector<std::size_t> order(records.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const auto bs = static_cast<std::size_t>(config.batch_size);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    Rng rng(DeriveSeed(DeriveSeed(config.seed, "shuffle"), static_cast<std::uint64_t>(epoch)));
    Shuffle(order, rng);
    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss.assign(model.task_count(), 0.0);
    std::vector<const InteractionRecord*> batch_recs;
    std::size_t batch_index = 0;
    for (std::size_t begin = 0; begin < order.size(); begin += bs, ++batch_index) {
      const std::size_t end = std::min(order.size(), begin + bs);
      batch_recs.clear();
      for (std::size_t i = begin; i < end; ++i) batch_recs.push_back(records[order[i]]);
      FeatureBatch batch =
          MakeBatch(std::span<const InteractionRecord* const>(batch_recs), model.spec().layout);
      model.params().ZeroGrad();
      try {
        Tape tape;
        LossTerms terms =
            MultitaskLoss(tape, model.Forward(tape, batch), batch.labels, model.tasks(), weights);
        if (!std::isfinite(terms.total.value()[0])) {
          throw DivergenceError(epoch, batch_index, "loss is not finite");
        }
        tape.Backward(terms.total);
        for (std::size_t t = 0; t < stats.train_loss.size(); ++t) {
          stats.train_loss[t] += terms.per_task[t] * static_cast<double>(end - begin);
        }
      } catch (const NonFiniteError& e) {
        throw DivergenceError(epoch, batch_index, e.what());
      }
      optimizer->Step(params);
      for (const Parameter* p : params) {
        if (!p->value.AllFinite()) {
          throw DivergenceError(epoch, batch_index, "parameter " + p->name + " is not finite");
        }
      }
    }
    for (double& v : stats.train_loss) v /= static_cast<double>(records.size());
    if (!AllFinite(stats.train_loss)) throw DivergenceError(epoch, batch_index, "loss is not finite");

    if (!val.empty()) {
      stats.val_loss = EvaluateLoss(model, val, weights);
      const auto scores = ScoreGroups(model, val);
      stats.val_ndcg = MeanNdcg(val, scores, rank_col, rank_task, config.eval_depth).mean();
    }
    report.epochs.push_back(stats);

    if (val.empty() || report.best_epoch < 0 || stats.val_ndcg > report.best_val_ndcg) {
      report.best_epoch = epoch;
      report.best_val_ndcg = stats.val_ndcg;
      snapshot();
      since_best = 0;
    } else if (config.patience > 0 && ++since_best >= config.patience) {
      report.stopped_early = true;
      break;
    }
  }
  for (std::size_t i = 0; i < params.size(); ++i) params[i]->value = best_values[i];
  report.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

TrainReport Train(RankingModel& model, std::span<const QueryGroup> groups,
                  const TrainConfig& config) {
  GroupSplit split = SplitByQueryHash(groups, config.val_fraction);
  return Train(model, split.train, split.val, config);
}

}  // namespace seqmd
