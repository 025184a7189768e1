#include <benchmark/benchmark.h>

#include "scenopt/pipeline.hpp"
#include "scenopt/simplex.hpp"

using namespace scenopt;

namespace {

void BM_SimplexLotSizing(benchmark::State& state) {
  const MclspInstance inst =
      generate_mclsp(1, static_cast<int>(state.range(0)), 8);
  const MipModel model = build_extensive_form(inst);
  for (auto _ : state) {
    const LpResult r = simplex_solve(model);
    benchmark::DoNotOptimize(r.objective);
  }
}
BENCHMARK(BM_SimplexLotSizing)->Arg(1)->Arg(2)->Arg(3);

void BM_BranchAndBound(benchmark::State& state) {
  GeneratorRanges ranges;
  ranges.capacity_ratio = 1.0;
  const MclspInstance inst =
      generate_mclsp(2, 3, static_cast<int>(state.range(0)), ranges);
  const MipModel model = build_extensive_form(inst);
  for (auto _ : state) {
    const MipResult r = branch_and_bound(model);
    benchmark::DoNotOptimize(r.objective);
  }
}
BENCHMARK(BM_BranchAndBound)->Arg(4)->Arg(6)->Arg(8)->Arg(10);

void BM_StochasticExtensiveSolve(benchmark::State& state) {
  const StochasticInstance inst =
      make_stochastic(generate_mclsp(3, 2, 4), {2, 2, 2}, 3);
  const MipModel model = build_extensive_form(inst);
  for (auto _ : state) {
    const MipResult r = branch_and_bound(model);
    benchmark::DoNotOptimize(r.objective);
  }
}
BENCHMARK(BM_StochasticExtensiveSolve);

void BM_ForwardChain(benchmark::State& state) {
  const int T = static_cast<int>(state.range(0));
  StochasticInstance inst;
  inst.kind = InstanceKind::Mclsp;
  inst.mclsp = generate_mclsp(4, 3, T);
  inst.tree = chain_tree(T, 3);
  const SeqModelParams model =
      init_params(feature_width(inst.kind, 3), 3, 32, 4);
  const auto features = make_features(inst);
  for (auto _ : state) {
    const ForwardResult r = forward(model, features);
    benchmark::DoNotOptimize(r.probs[0].back()[0]);
  }
}
BENCHMARK(BM_ForwardChain)->Arg(5)->Arg(10)->Arg(20);

void BM_ForwardTree(benchmark::State& state) {
  const StochasticInstance inst =
      make_stochastic(generate_mclsp(5, 2, 4), {2, 2, 2}, 5);
  const SeqModelParams model =
      init_params(feature_width(inst.kind, 2), 2, 32, 5);
  const auto features = make_features(inst);
  for (auto _ : state) {
    const ForwardResult r = forward(model, features, &inst.tree);
    benchmark::DoNotOptimize(r.probs[0].back()[0]);
  }
}
BENCHMARK(BM_ForwardTree);

void BM_TrainEpoch(benchmark::State& state) {
  DatasetSpec spec;
  spec.items = 2;
  spec.horizon = 4;
  spec.count = 10;
  spec.seed = 6;
  spec.ranges.capacity_ratio = 1.0;
  const Dataset data = make_dataset(spec);
  std::vector<TrainingSample> samples;
  for (const auto& e : data.entries) samples.push_back(e.sample);
  TrainConfig config;
  config.epochs = 1;
  config.hidden = 16;
  for (auto _ : state) {
    const SeqModelParams m = train(samples, config);
    benchmark::DoNotOptimize(m.out_b[0]);
  }
}
BENCHMARK(BM_TrainEpoch);

}  // namespace

BENCHMARK_MAIN();
