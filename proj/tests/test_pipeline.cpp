#include <doctest.h>

#include <sstream>

#include "scenopt/pipeline.hpp"

using namespace scenopt;

namespace {

StochasticInstance tiny_mclsp(std::uint64_t seed, double capacity_ratio = 1.0) {
  GeneratorRanges loose;
  loose.capacity_ratio = capacity_ratio;
  StochasticInstance inst;
  inst.kind = InstanceKind::Mclsp;
  inst.mclsp = generate_mclsp(seed, 2, 4, loose);
  inst.tree = chain_tree(4, 2);
  return inst;
}

SeqModelParams quick_model(const DatasetSpec& spec, int epochs) {
  const Dataset data = make_dataset(spec);
  std::vector<TrainingSample> samples;
  for (const auto& e : data.entries) samples.push_back(e.sample);
  TrainConfig config;
  config.epochs = epochs;
  config.hidden = 8;
  config.seed = 4;
  return train(samples, config);
}

}  // namespace

TEST_CASE("pipeline config validation") {
  PipelineConfig config;
  config.fix_threshold = 0.5;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config.fix_threshold = 1.01;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config.fix_threshold = 0.9;
  config.validate();
}

TEST_CASE("screening fixes only confident probabilities") {
  const StochasticInstance inst = tiny_mclsp(1);
  // column layout: [item][node]; keep everything easily satisfiable
  std::vector<std::vector<double>> probs(2, std::vector<double>(4, 0.5));
  probs[0][0] = 0.97;  // confident one
  probs[1][3] = 0.95;
  probs[1][1] = 0.6;  // not confident enough either way
  PipelineConfig config;
  const ScreenResult res = screen(inst, probs, config);
  CHECK(res.fixes.count(setup_index(InstanceKind::Mclsp, 2, 0, 0)));
  CHECK(res.fixes.at(setup_index(InstanceKind::Mclsp, 2, 0, 0)) == 1.0);
  CHECK(res.fixes.count(setup_index(InstanceKind::Mclsp, 2, 1, 3)));
  CHECK(!res.fixes.count(setup_index(InstanceKind::Mclsp, 2, 1, 1)));
  CHECK(res.rounded[1][1] == 1.0);  // rounding is thresholded at 0.5
}

TEST_CASE("mclsp repair reopens capacity when zero-fixes choke demand") {
  const StochasticInstance inst = tiny_mclsp(2, 2.0);
  // everything confidently zero is infeasible: demand must be produced
  std::vector<std::vector<double>> probs(2, std::vector<double>(4, 0.02));
  PipelineConfig config;
  const ScreenResult res = screen(inst, probs, config);
  CHECK(res.raw_infeasible);
  CHECK(res.repair_actions > 0);
  // repaired fixes leave the restricted model solvable
  const MipModel m = build_extensive_form(inst);
  BnbOptions opts;
  opts.fixes = res.fixes;
  CHECK(branch_and_bound(m, opts).status == SolveStatus::Optimal);
}

TEST_CASE("repair budget exhaustion degrades to an empty fix set") {
  const StochasticInstance inst = tiny_mclsp(3);
  std::vector<std::vector<double>> probs(2, std::vector<double>(4, 0.02));
  PipelineConfig config;
  config.unfix_budget = 0;
  const ScreenResult res = screen(inst, probs, config);
  CHECK(res.budget_exhausted);
  CHECK(res.fixes.empty());
}

TEST_CASE("msmk repair drops one-fixes until knapsacks fit") {
  StochasticInstance inst;
  inst.kind = InstanceKind::Msmk;
  inst.msmk = generate_msmk(5, 3, 2);
  inst.tree = chain_tree(2, 3);
  // confidently select everything; tightness 0.25 forbids that
  std::vector<std::vector<double>> probs(3, std::vector<double>(2, 0.99));
  PipelineConfig config;
  const ScreenResult res = screen(inst, probs, config);
  CHECK(res.raw_infeasible);
  CHECK(res.repair_actions > 0);
  for (const auto& node : inst.tree.nodes) {
    double load = 0.0;
    for (int j = 0; j < 3; ++j)
      if (res.rounded[j][node.id] == 1.0)
        load += inst.msmk.weight[j][node.stage - 1];
    CHECK(load <= inst.msmk.capacity[node.stage - 1] + 1e-9);
  }
}

TEST_CASE("screening disabled leaves raw candidates untouched") {
  const StochasticInstance inst = tiny_mclsp(4);
  std::vector<std::vector<double>> probs(2, std::vector<double>(4, 0.02));
  PipelineConfig config;
  config.screening = false;
  const ScreenResult res = screen(inst, probs, config);
  CHECK(res.repair_actions == 0);
  CHECK(res.fixes.size() == 8);  // every variable confidently zero
}

TEST_CASE("warm-start-only pipeline matches the plain solve") {
  DatasetSpec spec;
  spec.items = 2;
  spec.horizon = 4;
  spec.count = 8;
  spec.seed = 60;
  spec.ranges.capacity_ratio = 1.0;
  const SeqModelParams model = quick_model(spec, 25);

  PipelineConfig config;
  config.mode = PipelineMode::WarmStart;
  for (std::uint64_t s = 200; s < 205; ++s) {
    const StochasticInstance inst = tiny_mclsp(s);
    const PipelineRunResult run = run_pipeline(inst, model, config);
    CHECK(run.report.status == SolveStatus::Optimal);
    CHECK(run.report.objective == run.report.reference_objective);
    CHECK(run.report.gap == 0.0);
    CHECK(evaluate_solution(inst, run.solution).feasible);
  }
}

TEST_CASE("fixing pipeline yields feasible solutions with bounded gap") {
  DatasetSpec spec;
  spec.items = 2;
  spec.horizon = 4;
  spec.count = 10;
  spec.seed = 70;
  spec.ranges.capacity_ratio = 1.0;
  const SeqModelParams model = quick_model(spec, 40);

  PipelineConfig config;
  config.mode = PipelineMode::FixThenWarmStart;
  for (std::uint64_t s = 300; s < 306; ++s) {
    const StochasticInstance inst = tiny_mclsp(s);
    const PipelineRunResult run = run_pipeline(inst, model, config);
    CHECK(run.report.status == SolveStatus::Optimal);
    CHECK(run.report.gap >= -1e-6);
    CHECK(evaluate_solution(inst, run.solution).feasible);
    CHECK(run.report.accuracy >= 0.0);
    CHECK(run.report.accuracy <= 1.0);
  }
}

TEST_CASE("dataset generation is deterministic and solves everything small") {
  DatasetSpec spec;
  spec.items = 2;
  spec.horizon = 3;
  spec.count = 5;
  spec.seed = 90;
  const Dataset a = make_dataset(spec);
  const Dataset b = make_dataset(spec);
  CHECK(a.skipped.empty());
  REQUIRE(a.entries.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(a.entries[i].optimum.objective == b.entries[i].optimum.objective);
    CHECK(a.entries[i].sample.targets == b.entries[i].sample.targets);
    CHECK(evaluate_solution(a.entries[i].instance, a.entries[i].optimum).feasible);
  }
}

TEST_CASE("stochastic dataset entries carry the tree") {
  DatasetSpec spec;
  spec.items = 2;
  spec.horizon = 3;
  spec.count = 3;
  spec.seed = 91;
  spec.branching = {2, 2};
  spec.ranges.capacity_ratio = 1.5;  // headroom for high-demand scenarios
  const Dataset data = make_dataset(spec);
  REQUIRE(!data.entries.empty());
  for (const auto& e : data.entries) {
    CHECK(e.instance.tree.num_scenarios() == 4);
    CHECK(e.sample.features.size() == 4);
  }
}

TEST_CASE("metrics csv and summary json aggregate hand-checked medians") {
  std::vector<std::pair<std::string, PipelineReport>> rows(3);
  rows[0].first = "a";
  rows[1].first = "b";
  rows[2].first = "c";
  rows[0].second.accuracy = 0.9;
  rows[1].second.accuracy = 0.5;
  rows[2].second.accuracy = 0.7;
  rows[0].second.gap = 0.01;
  rows[1].second.gap = 0.05;
  rows[2].second.gap = 0.02;
  rows[0].second.time_factor = 2.0;
  rows[1].second.time_factor = 8.0;
  rows[2].second.time_factor = 4.0;

  std::stringstream csv;
  write_metrics_csv(rows, csv);
  std::string header;
  std::getline(csv, header);
  CHECK(header.rfind("id,accuracy", 0) == 0);
  int lines = 0;
  for (std::string line; std::getline(csv, line);) ++lines;
  CHECK(lines == 3);

  std::stringstream summary;
  write_summary_json(rows, summary);
  const std::string s = summary.str();
  // medians by hand: accuracy 0.7, gap 0.02, time factor 4
  CHECK(s.find("\"accuracy\":{\"median\":0.69999999999999996") != std::string::npos);
  CHECK(s.find("\"gap\":{\"median\":0.02") != std::string::npos);
  CHECK(s.find("\"time_factor\":{\"median\":4") != std::string::npos);
}
