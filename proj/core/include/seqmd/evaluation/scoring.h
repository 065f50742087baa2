#ifndef SEQMD_EVALUATION_SCORING_H_
#define SEQMD_EVALUATION_SCORING_H_

#include <span>
#include <vector>

#include "seqmd/evaluation/ndcg.h"
#include "seqmd/models/model.h"

namespace seqmd {

// Probabilities [group size x k] for every group, using the model's layout.
std::vector<Tensor> ScoreGroups(const RankingModel& model, std::span<const QueryGroup> groups,
                                std::size_t chunk = 4096);

// Mean NDCG of `task` ranked by column `column` of each score matrix.
NdcgStat MeanNdcg(std::span<const QueryGroup> groups, const std::vector<Tensor>& scores,
                  std::size_t column, Task task, int depth = kDefaultNdcgDepth,
                  GainKind kind = GainKind::kBinary);

// The column a model ranks by for `task`: the task's own column, else the
// last (deepest) task of the model.
std::size_t RankingColumn(const RankingModel& model, Task task);

}  // namespace seqmd

#endif  // SEQMD_EVALUATION_SCORING_H_
