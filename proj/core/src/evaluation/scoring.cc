#include "seqmd/evaluation/scoring.h"

#include <algorithm>

#include "seqmd/error.h"

namespace seqmd {

std::vector<Tensor> ScoreGroups(const RankingModel& model, std::span<const QueryGroup> groups,
                                std::size_t chunk) {
  std::vector<Tensor> out;
  out.reserve(groups.size());
  const std::size_t k = model.task_count();
  std::size_t g = 0;
  while (g < groups.size()) {
    std::vector<const InteractionRecord*> recs;
    const std::size_t first = g;
    while (g < groups.size() && (recs.empty() || recs.size() + groups[g].size() <= chunk)) {
      for (const auto& r : groups[g].records) recs.push_back(&r);
      ++g;
    }
    FeatureBatch batch =
        MakeBatch(std::span<const InteractionRecord* const>(recs), model.spec().layout);
    const Tensor probs = PredictProbs(model, batch);
    std::size_t row = 0;
    for (std::size_t i = first; i < g; ++i) {
      const std::size_t n = groups[i].size();
      std::vector<double> block(probs.raw() + row * k, probs.raw() + (row + n) * k);
      out.emplace_back(Shape{n, k}, std::move(block));
      row += n;
    }
  }
  return out;
}

NdcgStat MeanNdcg(std::span<const QueryGroup> groups, const std::vector<Tensor>& scores,
                  std::size_t column, Task task, int depth, GainKind kind) {
  if (scores.size() != groups.size()) throw DimensionError("one score matrix per group needed");
  NdcgStat stat;
  std::vector<double> col;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const Tensor& s = scores[i];
    col.resize(s.rows());
    for (std::size_t r = 0; r < s.rows(); ++r) col[r] = s(r, column);
    stat.Add(NdcgForTask(groups[i], col, task, depth, kind));
  }
  return stat;
}

std::size_t RankingColumn(const RankingModel& model, Task task) {
  const int c = model.TaskColumn(task);
  return c >= 0 ? static_cast<std::size_t>(c) : model.task_count() - 1;
}

}  // namespace seqmd
