#pragma once

#include "scenopt/instances.hpp"
#include "scenopt/seqmodel.hpp"

namespace scenopt {

// Stage input width for a given instance kind and item count. MCLSP packs
// per-item [realized demand, setup, production, holding, payload] plus
// [capacity, cumulative realized demand share]; MSMK packs per-item
// [realized value, weight, payload] plus [tightness, stage progress].
int feature_width(InstanceKind kind, int items);

// Per-scenario stage inputs, min-max normalized by instance-level maxima.
// Entries at stage t depend only on the history through t, so features
// are identical across a bundle.
std::vector<std::vector<Vec>> make_features(const StochasticInstance& inst);

// Setup / selection targets along each scenario path (node-consistent by
// construction: values are read off node-indexed decisions).
std::vector<std::vector<Vec>> make_targets(const StochasticInstance& inst,
                                           const SolutionVector& optimum);

// Node-level probabilities from scenario-level predictions: each node
// takes the value of the first scenario passing through it.
std::vector<std::vector<double>> node_probabilities(
    const StochasticInstance& inst,
    const std::vector<std::vector<Vec>>& probs);  // -> [item][node]

}  // namespace scenopt
