#include <benchmark/benchmark.h>

#include "seqmd/datasets/generator.h"
#include "seqmd/evaluation/ndcg.h"
#include "seqmd/random.h"

namespace seqmd {
namespace {

void BM_NdcgForTask(benchmark::State& state) {
  GeneratorConfig gen;
  gen.candidates = static_cast<int>(state.range(0));
  const QueryGroup g = GenerateGroup(gen, 0);
  Rng rng(1);
  std::vector<double> scores(g.size());
  for (double& s : scores) s = rng.Uniform01();
  for (auto _ : state) benchmark::DoNotOptimize(NdcgForTask(g, scores, Task::kClick));
}
BENCHMARK(BM_NdcgForTask)->Arg(10)->Arg(48)->Arg(200);

void BM_NdcgOracle(benchmark::State& state) {
  GeneratorConfig gen;
  gen.candidates = static_cast<int>(state.range(0));
  const QueryGroup g = GenerateGroup(gen, 0);
  Rng rng(1);
  std::vector<double> scores(g.size());
  for (double& s : scores) s = rng.Uniform01();
  for (auto _ : state) benchmark::DoNotOptimize(NdcgOracle(g, scores, Task::kClick));
}
BENCHMARK(BM_NdcgOracle)->Arg(4)->Arg(6)->Arg(8);

}  // namespace
}  // namespace seqmd
