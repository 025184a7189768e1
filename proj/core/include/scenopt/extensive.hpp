#pragma once

#include "scenopt/instances.hpp"
#include "scenopt/mip.hpp"

namespace scenopt {

// Node-indexed deterministic equivalent. Variables are ordered by tree
// node (breadth-first), then item: MCLSP has [setup, production,
// inventory] triples per (node, item), MSMK a single binary. Indexing by
// node rather than scenario enforces non-anticipativity by construction.
MipModel build_extensive_form(const StochasticInstance& inst);
MipModel build_extensive_form(const MclspInstance& inst);
MipModel build_extensive_form(const MsmkInstance& inst);

// Variable index helpers matching the ordering above.
int setup_index(InstanceKind kind, int items, int item, int node);
int production_index(int items, int item, int node);  // MCLSP
int inventory_index(int items, int item, int node);   // MCLSP

// Maps a model-space assignment back onto node-indexed decisions.
SolutionVector solution_from_assignment(const StochasticInstance& inst,
                                        const std::vector<double>& x,
                                        double objective);

// Flattens node-indexed decisions into model variable order (e.g. to seed
// a warm start).
std::vector<double> assignment_from_solution(const StochasticInstance& inst,
                                             const SolutionVector& sol);

}  // namespace scenopt
