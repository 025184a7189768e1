#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "scenopt/scenario.hpp"

namespace scenopt {

// Multi-item capacitated lot sizing. Arrays are [item][stage].
struct MclspInstance {
  int items = 0;
  int horizon = 0;
  std::vector<std::vector<double>> demand;
  std::vector<std::vector<double>> setup_cost;
  std::vector<std::vector<double>> production_cost;
  std::vector<std::vector<double>> holding_cost;
  std::vector<double> capacity;           // per stage
  std::vector<double> initial_inventory;  // per item

  void validate() const;
};

// Multi-stage knapsack: one knapsack per stage, a binary pick per
// (item, stage). Arrays are [item][stage].
struct MsmkInstance {
  int items = 0;
  int horizon = 0;
  std::vector<std::vector<double>> value;
  std::vector<std::vector<double>> weight;
  std::vector<double> capacity;  // per stage

  void validate() const;
};

enum class InstanceKind { Mclsp, Msmk };

// Scenario-tree instance: the tree's node payloads are per-item
// multiplicative factors on the uncertain parameter (MCLSP demand,
// MSMK value). Payload dimension must equal the item count.
struct StochasticInstance {
  InstanceKind kind = InstanceKind::Mclsp;
  MclspInstance mclsp;  // valid when kind == Mclsp
  MsmkInstance msmk;    // valid when kind == Msmk
  ScenarioTree tree;

  int items() const { return kind == InstanceKind::Mclsp ? mclsp.items : msmk.items; }
  int horizon() const { return tree.horizon; }
  // realized uncertain parameter at a node
  double realized_demand(int item, int node) const;
  double realized_value(int item, int node) const;
  void validate() const;
};

// Node-indexed decisions. For deterministic instances the "nodes" are the
// stages 0..T-1 of the implicit single-scenario chain. Node indexing makes
// non-anticipativity structural.
struct SolutionVector {
  std::vector<std::vector<double>> setup;       // [item][node], binary
  std::vector<std::vector<double>> production;  // [item][node], MCLSP only
  std::vector<std::vector<double>> inventory;   // [item][node], MCLSP only
  double objective = 0.0;                       // minimization form
};

struct GeneratorRanges {
  // MCLSP
  long demand_lo = 1, demand_hi = 20;
  double setup_lo = 20, setup_hi = 100;
  double production_lo = 1, production_hi = 5;
  double holding_lo = 1, holding_hi = 3;
  double capacity_ratio = 0.6;  // of stage demand sum, before feasibility repair
  // MSMK
  double value_lo = 10, value_hi = 100;
  double weight_lo = 1, weight_hi = 30;
  double tightness = 0.25;  // capacity[t] = tightness * stage weight sum
};

MclspInstance generate_mclsp(std::uint64_t seed, int items, int horizon,
                             const GeneratorRanges& ranges = {});
MsmkInstance generate_msmk(std::uint64_t seed, int items, int horizon,
                           const GeneratorRanges& ranges = {});

StochasticInstance make_stochastic(const MclspInstance& base,
                                   const std::vector<int>& branching,
                                   std::uint64_t seed);
StochasticInstance make_stochastic(const MsmkInstance& base,
                                   const std::vector<int>& branching,
                                   std::uint64_t seed);

// Item-subset restriction with proportional capacity rescaling. `subset`
// holds ascending item indices of the original instance.
MclspInstance restrict_to_subset(const MclspInstance& inst,
                                 const std::vector<int>& subset);
MsmkInstance restrict_to_subset(const MsmkInstance& inst,
                                const std::vector<int>& subset);
StochasticInstance restrict_to_subset(const StochasticInstance& inst,
                                      const std::vector<int>& subset);

struct Evaluation {
  double objective = 0.0;     // minimization form (MSMK: negated value)
  double max_residual = 0.0;  // worst constraint violation
  bool feasible = false;      // max_residual <= 1e-6
};

Evaluation evaluate_solution(const MclspInstance& inst, const SolutionVector& sol);
Evaluation evaluate_solution(const MsmkInstance& inst, const SolutionVector& sol);
Evaluation evaluate_solution(const StochasticInstance& inst, const SolutionVector& sol);

// Line-delimited JSON with a kind tag; 17-digit decimals.
void save_mclsp(const MclspInstance& inst, std::ostream& out);
void save_msmk(const MsmkInstance& inst, std::ostream& out);
void save_stochastic(const StochasticInstance& inst, std::ostream& out);
// Reads whichever kind the stream holds.
StochasticInstance load_instance(std::istream& in, bool* is_stochastic = nullptr);

// CSV table of demand (or weight) rows plus the capacity row, for inspection.
void export_tables_csv(const MclspInstance& inst, std::ostream& out);
void export_tables_csv(const MsmkInstance& inst, std::ostream& out);

}  // namespace scenopt
