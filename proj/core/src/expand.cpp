#include "scenopt/expand.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "scenopt/rng.hpp"

namespace scenopt {

std::vector<std::vector<Vec>> expand_horizon(const SeqModelParams& model,
                                             const StochasticInstance& inst) {
  const auto features = make_features(inst);
  const ScenarioTree* tree =
      inst.tree.num_scenarios() > 1 ? &inst.tree : nullptr;
  return forward(model, features, tree).probs;
}

ExpansionResult itemwise_expand(const SeqModelParams& model,
                                const StochasticInstance& inst,
                                int coverage_threshold, std::uint64_t seed,
                                const SubsetSchedule* schedule) {
  const int total_items = inst.items();
  const int dm = model.items;
  if (dm < 1 || dm > total_items)
    throw std::invalid_argument(
        "itemwise_expand: trained dimension must be in [1, |D|]");
  if (coverage_threshold < 0)
    throw std::invalid_argument("itemwise_expand: negative coverage threshold");

  const int S = inst.tree.num_scenarios();
  const int T = inst.horizon();
  ExpansionState state;
  state.coverage_threshold = coverage_threshold;
  state.trained_items = dm;
  state.counts.assign(total_items, 0);
  state.sums.assign(S, std::vector<Vec>(T, Vec::Zero(total_items)));

  Rng rng(Rng::mix(seed, 0x657870616eULL));
  const long cap = 50L * ((total_items + dm - 1) / dm) *
                   (static_cast<long>(coverage_threshold) + 1);
  int used = 0;
  std::size_t schedule_pos = 0;

  auto uncovered = [&] {
    return std::any_of(state.counts.begin(), state.counts.end(),
                       [&](long c) { return c <= coverage_threshold; });
  };

  while (uncovered()) {
    if (used >= cap)
      throw std::runtime_error("itemwise_expand: coverage loop exceeded cap");
    std::vector<int> subset;
    if (schedule) {
      if (schedule_pos >= schedule->size())
        throw std::runtime_error("itemwise_expand: schedule exhausted");
      subset = (*schedule)[schedule_pos++];
      if (static_cast<int>(subset.size()) != dm)
        throw std::invalid_argument("itemwise_expand: schedule subset size");
    } else {
      // least-covered-first with seeded random tie-breaking
      std::vector<std::pair<double, int>> keyed(total_items);
      for (int j = 0; j < total_items; ++j)
        keyed[j] = {static_cast<double>(state.counts[j]) + rng.uniform() * 0.5,
                    j};
      std::sort(keyed.begin(), keyed.end());
      subset.reserve(dm);
      for (int k = 0; k < dm; ++k) subset.push_back(keyed[k].second);
      std::sort(subset.begin(), subset.end());
    }

    const StochasticInstance restricted = restrict_to_subset(inst, subset);
    const auto features = make_features(restricted);
    const ScenarioTree* tree =
        restricted.tree.num_scenarios() > 1 ? &restricted.tree : nullptr;
    const auto probs = forward(model, features, tree).probs;
    for (int s = 0; s < S; ++s)
      for (int t = 0; t < T; ++t)
        for (int k = 0; k < dm; ++k)
          state.sums[s][t][subset[k]] += probs[s][t][k];
    for (int j : subset) ++state.counts[j];
    ++used;
  }

  ExpansionResult result;
  result.subsets_used = used;
  result.probs.assign(S, std::vector<Vec>(T, Vec::Zero(total_items)));
  for (int s = 0; s < S; ++s)
    for (int t = 0; t < T; ++t)
      for (int j = 0; j < total_items; ++j)
        result.probs[s][t][j] =
            state.sums[s][t][j] / static_cast<double>(state.counts[j]);
  return result;
}

}  // namespace scenopt
