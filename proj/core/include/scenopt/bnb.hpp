#pragma once

#include <functional>
#include <optional>

#include "scenopt/mip.hpp"

namespace scenopt {

struct BnbOptions {
  FixSet fixes;
  // feasible assignment used to seed the incumbent; ignored (with a note
  // through `log`) when it fails the feasibility screen
  std::optional<std::vector<double>> warm_start;
  double time_limit_seconds = kInf;
  std::function<void(const std::string&)> log;  // optional
};

// Exact depth-first branch and bound over the binary variables with
// LP-relaxation bounding. Branching picks the most fractional binary
// (ties by lowest index) and explores the nearer rounding first, which
// keeps node exploration deterministic for fixed inputs.
MipResult branch_and_bound(const MipModel& model, const BnbOptions& opts = {});

// Enumerates every assignment of the (<= 20) binaries and solves the
// continuous remainder by simplex. Verification oracle; refuses larger
// models to guard runtime.
MipResult exhaustive_oracle(const MipModel& model);

// True when the assignment satisfies every row and integrality within tol.
bool check_feasible(const MipModel& model, const std::vector<double>& x,
                    double tol = 1e-6);

}  // namespace scenopt
