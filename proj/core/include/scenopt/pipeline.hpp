#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "scenopt/bnb.hpp"
#include "scenopt/expand.hpp"
#include "scenopt/extensive.hpp"
#include "scenopt/features.hpp"
#include "scenopt/instances.hpp"

namespace scenopt {

enum class PipelineMode { Fix, WarmStart, FixThenWarmStart };

struct PipelineConfig {
  double fix_threshold = 0.9;  // must be in (0.5, 1]
  PipelineMode mode = PipelineMode::FixThenWarmStart;
  bool screening = true;
  double time_limit_seconds = kInf;
  int unfix_budget = 200;  // repair actions per round

  void validate() const;  // throws std::invalid_argument
};

struct PipelineReport {
  double accuracy = 0.0;             // all binaries vs archived optimum
  double accuracy_fixed_only = 0.0;  // restricted to variables that were fixed
  double gap = 0.0;                  // (z_hat - z_star) / |z_star|
  double infeasible_before_repair = 0.0;  // 1 when raw rounding failed screening
  double time_factor = 1.0;               // t_reference / t_pipeline
  int repair_actions = 0;
  int fixed_count = 0;
  SolveStatus status = SolveStatus::Optimal;
  double objective = 0.0;
  double reference_objective = 0.0;
  double time_reference = 0.0;
  double time_pipeline = 0.0;
};

struct ScreenResult {
  FixSet fixes;
  std::vector<std::vector<double>> rounded;  // repaired 0/1 per [item][node]
  int repair_actions = 0;
  bool raw_infeasible = false;
  bool budget_exhausted = false;  // fixes emptied, pipeline degrades to plain solve
};

// Threshold-based candidate fixing plus aggregate feasibility repair:
// MCLSP unfixes low-confidence zero-fixes while cumulative open capacity
// trails cumulative demand along some scenario path; MSMK unfixes
// low-confidence one-fixes while a knapsack is overloaded.
ScreenResult screen(const StochasticInstance& inst,
                    const std::vector<std::vector<double>>& node_probs,
                    const PipelineConfig& config);

struct PipelineRunResult {
  SolutionVector solution;
  PipelineReport report;
};

// predict -> screen -> fix/warm-start -> solve -> verify. The reference
// time and optimum come from a plain branch-and-bound run on the same
// model. Infeasible restrictions fall back by halving the fix set by
// confidence (up to 3 times), then a plain solve.
PipelineRunResult run_pipeline(const StochasticInstance& inst,
                               const SeqModelParams& model,
                               const PipelineConfig& config);

struct DatasetSpec {
  InstanceKind kind = InstanceKind::Mclsp;
  int items = 3;
  int horizon = 10;
  int count = 10;
  std::uint64_t seed = 1;
  std::vector<int> branching;  // empty -> deterministic instances
  GeneratorRanges ranges;
  double solver_time_limit = kInf;
};

struct DatasetEntry {
  StochasticInstance instance;
  SolutionVector optimum;
  TrainingSample sample;
};

struct Dataset {
  std::vector<DatasetEntry> entries;
  std::vector<std::string> skipped;  // reasons for excluded instances
};

// Generates, solves, and packages training samples; instances the solver
// cannot close within budget are excluded with a logged reason.
Dataset make_dataset(const DatasetSpec& spec);

// Metrics CSV (one row per instance) and JSON summary (medians + means).
void write_metrics_csv(const std::vector<std::pair<std::string, PipelineReport>>& rows,
                       std::ostream& out);
void write_summary_json(const std::vector<std::pair<std::string, PipelineReport>>& rows,
                        std::ostream& out);

}  // namespace scenopt
