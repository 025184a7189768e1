#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace scenopt {

// Node of a full, stage-uniform scenario tree. Ids are dense integers
// assigned breadth-first; the root has id 0 and no parent.
struct TreeNode {
  int id = 0;
  int stage = 1;        // 1-based
  int parent = -1;      // -1 for root
  double prob = 1.0;    // conditional probability given the parent
  std::vector<double> payload;  // realization vector (e.g. demand multipliers)
};

struct ScenarioTree {
  int horizon = 1;             // T
  std::vector<int> branching;  // length T-1; branching[t-1] children at stage t
  std::uint64_t seed = 0;
  std::vector<TreeNode> nodes;  // breadth-first order

  int num_scenarios() const;
  int node_count() const { return static_cast<int>(nodes.size()); }
  const TreeNode& root() const { return nodes.front(); }
  std::vector<int> children(int node_id) const;
  // leaf ids in breadth-first order; index in this list is the scenario id
  std::vector<int> leaves() const;
  // absolute probability of reaching a node (product of conditionals)
  double node_probability(int node_id) const;
  // node visited by a scenario at a given stage
  int node_at(int scenario, int stage) const;

  // throws std::invalid_argument if structural invariants are violated
  void validate() const;
};

// Information set at a fixed stage: scenarios indistinguishable through
// that stage. Bundles at a stage partition the scenario set.
struct ScenarioBundle {
  int stage = 1;
  int representative = 0;    // smallest member scenario id
  std::vector<int> members;  // ascending scenario ids
};

struct ScenarioPath {
  int scenario = 0;
  std::vector<int> node_by_stage;  // length T
  double probability = 1.0;
};

// Builds a full tree with uniform conditional probabilities and payload
// entries drawn from a discrete multiplier set (root payload is all-ones,
// stage 1 being deterministic).
ScenarioTree build_tree(const std::vector<int>& branching, std::uint64_t seed,
                        int payload_dim,
                        const std::vector<double>& payload_levels = {0.8, 1.0,
                                                                     1.2});

// Degenerate single-scenario chain of length T with unit payloads.
ScenarioTree chain_tree(int horizon, int payload_dim = 1);

std::vector<ScenarioBundle> bundle_partition(const ScenarioTree& tree, int stage);
std::vector<ScenarioPath> scenario_paths(const ScenarioTree& tree);

// Line-delimited JSON: one header record, then one record per node.
// Doubles are written with 17 significant digits so round-trips are
// bit-exact.
void save_tree(const ScenarioTree& tree, std::ostream& out);
ScenarioTree load_tree(std::istream& in);

}  // namespace scenopt
