#pragma once

#include "scenopt/mip.hpp"

namespace scenopt {

// Dense-tableau two-phase primal simplex with Bland's rule (anti-cycling).
// Binaries are relaxed to their [lb, ub] box; entries of `fixes` are
// substituted out before solving. Deterministic for fixed input.
LpResult simplex_solve(const MipModel& model, const FixSet& fixes = {});

// Variant used by branch and bound: per-variable bound overrides
// (same length as model.vars; entries may tighten but not relax).
LpResult simplex_solve_bounded(const MipModel& model,
                               const std::vector<double>& lb,
                               const std::vector<double>& ub);

}  // namespace scenopt
