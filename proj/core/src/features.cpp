#include "scenopt/features.hpp"

#include <algorithm>
#include <stdexcept>

namespace scenopt {

namespace {

double grid_max(const std::vector<std::vector<double>>& g) {
  double m = 0.0;
  for (const auto& row : g)
    for (double v : row) m = std::max(m, v);
  return m > 0.0 ? m : 1.0;
}

double vec_max(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m > 0.0 ? m : 1.0;
}

}  // namespace

int feature_width(InstanceKind kind, int items) {
  return kind == InstanceKind::Mclsp ? 5 * items + 2 : 3 * items + 2;
}

std::vector<std::vector<Vec>> make_features(const StochasticInstance& inst) {
  const int d = inst.items();
  const int T = inst.horizon();
  const auto paths = scenario_paths(inst.tree);
  const int S = static_cast<int>(paths.size());
  std::vector<std::vector<Vec>> out(S, std::vector<Vec>(T));

  if (inst.kind == InstanceKind::Mclsp) {
    const auto& m = inst.mclsp;
    const double dem_max = grid_max(m.demand);
    const double setup_max = grid_max(m.setup_cost);
    const double prod_max = grid_max(m.production_cost);
    const double hold_max = grid_max(m.holding_cost);
    const double cap_max = vec_max(m.capacity);
    // horizon-total normalizer for the cumulative-demand feature; payload
    // factors are bounded by a small constant so the base total suffices
    double dem_total = 0.0;
    for (const auto& row : m.demand)
      for (double v : row) dem_total += v;
    if (dem_total <= 0.0) dem_total = 1.0;

    for (int s = 0; s < S; ++s) {
      double cum_realized = 0.0;
      for (int t = 0; t < T; ++t) {
        const int node = paths[s].node_by_stage[t];
        Vec f(feature_width(inst.kind, d));
        int k = 0;
        for (int j = 0; j < d; ++j) {
          const double dem = inst.realized_demand(j, node);
          cum_realized += dem;
          f[k++] = dem / dem_max;
          f[k++] = m.setup_cost[j][t] / setup_max;
          f[k++] = m.production_cost[j][t] / prod_max;
          f[k++] = m.holding_cost[j][t] / hold_max;
          f[k++] = inst.tree.nodes[node].payload[j];
        }
        f[k++] = m.capacity[t] / cap_max;
        f[k++] = cum_realized / dem_total;
        out[s][t] = std::move(f);
      }
    }
  } else {
    const auto& m = inst.msmk;
    const double val_max = grid_max(m.value);
    const double w_max = grid_max(m.weight);
    for (int s = 0; s < S; ++s) {
      for (int t = 0; t < T; ++t) {
        const int node = paths[s].node_by_stage[t];
        Vec f(feature_width(inst.kind, d));
        int k = 0;
        double stage_weight = 0.0;
        for (int j = 0; j < d; ++j) stage_weight += m.weight[j][t];
        for (int j = 0; j < d; ++j) {
          f[k++] = inst.realized_value(j, node) / val_max;
          f[k++] = m.weight[j][t] / w_max;
          f[k++] = inst.tree.nodes[node].payload[j];
        }
        f[k++] = stage_weight > 0.0 ? m.capacity[t] / stage_weight : 0.0;
        f[k++] = static_cast<double>(t + 1) / T;
        out[s][t] = std::move(f);
      }
    }
  }
  return out;
}

std::vector<std::vector<Vec>> make_targets(const StochasticInstance& inst,
                                           const SolutionVector& optimum) {
  const int d = inst.items();
  const int T = inst.horizon();
  const auto paths = scenario_paths(inst.tree);
  std::vector<std::vector<Vec>> out(paths.size(), std::vector<Vec>(T));
  for (std::size_t s = 0; s < paths.size(); ++s)
    for (int t = 0; t < T; ++t) {
      Vec y(d);
      for (int j = 0; j < d; ++j)
        y[j] = optimum.setup[j][paths[s].node_by_stage[t]] >= 0.5 ? 1.0 : 0.0;
      out[s][t] = std::move(y);
    }
  return out;
}

std::vector<std::vector<double>> node_probabilities(
    const StochasticInstance& inst,
    const std::vector<std::vector<Vec>>& probs) {
  const int d = inst.items();
  const auto paths = scenario_paths(inst.tree);
  std::vector<std::vector<double>> out(
      d, std::vector<double>(inst.tree.node_count(), -1.0));
  for (std::size_t s = 0; s < paths.size(); ++s)
    for (int t = 0; t < inst.horizon(); ++t) {
      const int node = paths[s].node_by_stage[t];
      if (out[0][node] >= 0.0) continue;  // earlier scenario already set it
      for (int j = 0; j < d; ++j) out[j][node] = probs[s][t][j];
    }
  return out;
}

}  // namespace scenopt
