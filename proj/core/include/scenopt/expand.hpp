#pragma once

#include <cstdint>

#include "scenopt/features.hpp"
#include "scenopt/instances.hpp"
#include "scenopt/seqmodel.hpp"

namespace scenopt {

// Running state of subset-based item-wise expansion: per-item cumulative
// prediction sums and counts against a coverage threshold.
struct ExpansionState {
  std::vector<std::vector<Vec>> sums;  // [scenario][stage] (|D|)
  std::vector<long> counts;            // per item
  int coverage_threshold = 2;
  int trained_items = 0;
};

struct ExpansionResult {
  std::vector<std::vector<Vec>> probs;  // [scenario][stage] (|D|), mean-aggregated
  int subsets_used = 0;
};

// Explicit subset sequence (each ascending, size = trained item count);
// tests inject these, production uses the seeded sampler.
using SubsetSchedule = std::vector<std::vector<int>>;

// Time-wise generalization: the per-step recurrence is simply applied for
// the instance's horizon, whatever it is.
std::vector<std::vector<Vec>> expand_horizon(const SeqModelParams& model,
                                             const StochasticInstance& inst);

// Subset-based item-wise expansion: repeatedly restrict to a sampled item
// subset of the trained dimension (with capacity rescaling), predict, and
// accumulate; items need coverage_threshold+1 predictions before the loop
// exits. Aggregation is the arithmetic mean of accumulated predictions.
// The default sampler prefers least-covered items with seeded tie-breaks.
ExpansionResult itemwise_expand(const SeqModelParams& model,
                                const StochasticInstance& inst,
                                int coverage_threshold, std::uint64_t seed,
                                const SubsetSchedule* schedule = nullptr);

}  // namespace scenopt
