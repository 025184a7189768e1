#include "scenopt/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "scenopt/jsonio.hpp"
#include "scenopt/simplex.hpp"

namespace scenopt {

void PipelineConfig::validate() const {
  if (!(fix_threshold > 0.5 && fix_threshold <= 1.0))
    throw std::invalid_argument("pipeline: fix threshold must be in (0.5, 1]");
  if (unfix_budget < 0)
    throw std::invalid_argument("pipeline: negative unfix budget");
}

namespace {

constexpr double kTol = 1e-9;

std::string status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Feasible: return "feasible";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::TimeLimit: return "time-limit";
  }
  return "unknown";
}

// One violated aggregate condition, or nothing when all checks pass.
struct Violation {
  int path = -1;
  int stage = -1;  // 0-based
  int item = -1;   // -1 for the all-items capacity check
};

// MCLSP necessary conditions along each scenario path: an item whose
// setups are blocked at a stage cannot use that stage's capacity, and a
// stage where every item is blocked contributes no capacity at all.
template <typename BlockedFn>
std::optional<Violation> mclsp_violation(const StochasticInstance& inst,
                                         const std::vector<ScenarioPath>& paths,
                                         BlockedFn blocked) {
  const auto& m = inst.mclsp;
  const int d = m.items;
  for (std::size_t pi = 0; pi < paths.size(); ++pi) {
    std::vector<double> open(d, 0.0), cum(d, 0.0);
    double open_all = 0.0, cum_all = 0.0;
    for (int t = 0; t < inst.horizon(); ++t) {
      const int node = paths[pi].node_by_stage[t];
      bool any_open = false;
      for (int j = 0; j < d; ++j) {
        const double dem = inst.realized_demand(j, node);
        cum[j] += dem;
        cum_all += dem;
        if (!blocked(j, node)) {
          open[j] += m.capacity[t];
          any_open = true;
        }
      }
      if (any_open) open_all += m.capacity[t];
      for (int j = 0; j < d; ++j)
        if (open[j] + m.initial_inventory[j] < cum[j] - kTol)
          return Violation{static_cast<int>(pi), t, j};
      double inv0 = 0.0;
      for (double v : m.initial_inventory) inv0 += v;
      if (open_all + inv0 < cum_all - kTol)
        return Violation{static_cast<int>(pi), t, -1};
    }
  }
  return std::nullopt;
}

// MSMK: fixed selections must fit each knapsack.
template <typename SelectedFn>
std::optional<int> msmk_overloaded_node(const StochasticInstance& inst,
                                        SelectedFn selected) {
  const auto& m = inst.msmk;
  for (const auto& node : inst.tree.nodes) {
    const int t = node.stage - 1;
    double load = 0.0;
    for (int j = 0; j < m.items; ++j)
      if (selected(j, node.id)) load += m.weight[j][t];
    if (load > m.capacity[t] + kTol) return node.id;
  }
  return std::nullopt;
}

}  // namespace

ScreenResult screen(const StochasticInstance& inst,
                    const std::vector<std::vector<double>>& node_probs,
                    const PipelineConfig& config) {
  config.validate();
  const int d = inst.items();
  const int n_nodes = inst.tree.node_count();
  if (static_cast<int>(node_probs.size()) != d)
    throw std::invalid_argument("screen: probability dimension mismatch");
  for (const auto& row : node_probs) {
    if (static_cast<int>(row.size()) != n_nodes)
      throw std::invalid_argument("screen: probability node count mismatch");
    for (double p : row)
      if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("screen: probability outside [0,1]");
  }

  ScreenResult res;
  res.rounded.assign(d, std::vector<double>(n_nodes, 0.0));
  for (int j = 0; j < d; ++j)
    for (int node = 0; node < n_nodes; ++node) {
      const double p = node_probs[j][node];
      res.rounded[j][node] = p >= 0.5 ? 1.0 : 0.0;
      const int var = setup_index(inst.kind, d, j, node);
      if (p >= config.fix_threshold)
        res.fixes[var] = 1.0;
      else if (p <= 1.0 - config.fix_threshold)
        res.fixes[var] = 0.0;
    }

  const auto paths = scenario_paths(inst.tree);

  if (inst.kind == InstanceKind::Mclsp) {
    auto fix_blocked = [&](int j, int node) {
      auto it = res.fixes.find(setup_index(inst.kind, d, j, node));
      return it != res.fixes.end() && it->second == 0.0;
    };
    auto round_blocked = [&](int j, int node) {
      return res.rounded[j][node] == 0.0;
    };
    res.raw_infeasible = mclsp_violation(inst, paths, round_blocked).has_value();
    if (!config.screening) return res;

    // repair the fix set: unfix the least confident zero-fix reachable
    // from the violated check until the aggregate conditions pass
    while (auto v = mclsp_violation(inst, paths, fix_blocked)) {
      if (res.repair_actions >= config.unfix_budget) {
        res.fixes.clear();
        res.budget_exhausted = true;
        break;
      }
      int best_var = -1;
      double best_conf = 2.0;
      const auto& path = paths[v->path];
      for (int t = 0; t <= v->stage; ++t) {
        const int node = path.node_by_stage[t];
        for (int j = 0; j < d; ++j) {
          if (v->item >= 0 && j != v->item) continue;
          const int var = setup_index(inst.kind, d, j, node);
          auto it = res.fixes.find(var);
          if (it == res.fixes.end() || it->second != 0.0) continue;
          const double conf = 1.0 - node_probs[j][node];
          if (conf < best_conf) {
            best_conf = conf;
            best_var = var;
          }
        }
      }
      if (best_var < 0) {
        // violation not caused by fixes; nothing to unfix
        res.fixes.clear();
        res.budget_exhausted = true;
        break;
      }
      res.fixes.erase(best_var);
      ++res.repair_actions;
    }

    // repair the rounded warm-start assignment by switching setups on
    while (auto v = mclsp_violation(inst, paths, round_blocked)) {
      int best_j = -1, best_node = -1;
      double best_p = -1.0;
      const auto& path = paths[v->path];
      for (int t = 0; t <= v->stage; ++t) {
        const int node = path.node_by_stage[t];
        for (int j = 0; j < d; ++j) {
          if (v->item >= 0 && j != v->item) continue;
          if (res.rounded[j][node] != 0.0) continue;
          if (node_probs[j][node] > best_p) {
            best_p = node_probs[j][node];
            best_j = j;
            best_node = node;
          }
        }
      }
      if (best_j < 0) break;  // every setup already on
      res.rounded[best_j][best_node] = 1.0;
      ++res.repair_actions;
    }
  } else {
    auto fix_selected = [&](int j, int node) {
      auto it = res.fixes.find(setup_index(inst.kind, d, j, node));
      return it != res.fixes.end() && it->second == 1.0;
    };
    auto round_selected = [&](int j, int node) {
      return res.rounded[j][node] == 1.0;
    };
    res.raw_infeasible = msmk_overloaded_node(inst, round_selected).has_value();
    if (!config.screening) return res;

    while (auto node = msmk_overloaded_node(inst, fix_selected)) {
      if (res.repair_actions >= config.unfix_budget) {
        res.fixes.clear();
        res.budget_exhausted = true;
        break;
      }
      int best_var = -1;
      double best_p = 2.0;
      for (int j = 0; j < d; ++j) {
        const int var = setup_index(inst.kind, d, j, *node);
        auto it = res.fixes.find(var);
        if (it == res.fixes.end() || it->second != 1.0) continue;
        if (node_probs[j][*node] < best_p) {
          best_p = node_probs[j][*node];
          best_var = var;
        }
      }
      if (best_var < 0) {
        res.fixes.clear();
        res.budget_exhausted = true;
        break;
      }
      res.fixes.erase(best_var);
      ++res.repair_actions;
    }

    while (auto node = msmk_overloaded_node(inst, round_selected)) {
      int best_j = -1;
      double best_p = 2.0;
      for (int j = 0; j < d; ++j) {
        if (res.rounded[j][*node] != 1.0) continue;
        if (node_probs[j][*node] < best_p) {
          best_p = node_probs[j][*node];
          best_j = j;
        }
      }
      if (best_j < 0) break;
      res.rounded[best_j][*node] = 0.0;
      ++res.repair_actions;
    }
  }
  return res;
}

namespace {

// keep the most confident half of a fix set (fallback after an
// infeasible restricted solve)
FixSet halve_by_confidence(const FixSet& fixes,
                           const StochasticInstance& inst,
                           const std::vector<std::vector<double>>& node_probs) {
  const int d = inst.items();
  std::vector<std::pair<double, int>> ranked;  // (-confidence, var)
  for (const auto& [var, val] : fixes) {
    const int node = inst.kind == InstanceKind::Mclsp ? var / (3 * d) : var / d;
    const int item = inst.kind == InstanceKind::Mclsp ? (var / 3) % d : var % d;
    const double p = node_probs[item][node];
    const double conf = val == 1.0 ? p : 1.0 - p;
    ranked.push_back({-conf, var});
  }
  std::sort(ranked.begin(), ranked.end());
  FixSet out;
  for (std::size_t k = 0; k < ranked.size() / 2; ++k) {
    const int var = ranked[k].second;
    out[var] = fixes.at(var);
  }
  return out;
}

}  // namespace

PipelineRunResult run_pipeline(const StochasticInstance& inst,
                               const SeqModelParams& model,
                               const PipelineConfig& config) {
  config.validate();
  const MipModel mip = build_extensive_form(inst);

  BnbOptions ref_opts;
  ref_opts.time_limit_seconds = config.time_limit_seconds;
  const MipResult reference = branch_and_bound(mip, ref_opts);

  const auto t0 = std::chrono::steady_clock::now();

  // predict (item-wise expansion when the instance is wider than the model)
  std::vector<std::vector<Vec>> probs;
  if (inst.items() > model.items)
    probs = itemwise_expand(model, inst, 2, inst.tree.seed + 1).probs;
  else
    probs = expand_horizon(model, inst);
  const auto node_probs = node_probabilities(inst, probs);

  ScreenResult screened = screen(inst, node_probs, config);
  FixSet fixes = config.mode == PipelineMode::WarmStart ? FixSet{}
                                                        : screened.fixes;

  // warm start: complete the repaired rounding with an LP over the
  // continuous part; dropped when that restriction is infeasible
  std::optional<std::vector<double>> warm;
  if (config.mode != PipelineMode::Fix) {
    FixSet all_fixed;
    for (int j = 0; j < inst.items(); ++j)
      for (int node = 0; node < inst.tree.node_count(); ++node)
        all_fixed[setup_index(inst.kind, inst.items(), j, node)] =
            screened.rounded[j][node];
    const LpResult lp = simplex_solve(mip, all_fixed);
    if (lp.status == SolveStatus::Optimal && check_feasible(mip, lp.x))
      warm = lp.x;
  }

  MipResult solved;
  int tries = 0;
  for (;;) {
    BnbOptions opts;
    opts.fixes = fixes;
    opts.time_limit_seconds = config.time_limit_seconds;
    if (warm) {
      // warm start must agree with the fixes to seed the incumbent
      bool agrees = true;
      for (const auto& [var, val] : fixes)
        if (std::abs((*warm)[var] - val) > 1e-6) agrees = false;
      if (agrees) opts.warm_start = warm;
    }
    solved = branch_and_bound(mip, opts);
    if (solved.status != SolveStatus::Infeasible) break;
    if (tries >= 3 || fixes.empty()) {
      solved = branch_and_bound(mip, ref_opts);
      break;
    }
    fixes = halve_by_confidence(fixes, inst, node_probs);
    ++tries;
  }

  const double t_pipe =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  PipelineRunResult out;
  out.report.status = solved.status;
  out.report.objective = solved.objective;
  out.report.reference_objective = reference.objective;
  out.report.repair_actions = screened.repair_actions;
  out.report.infeasible_before_repair = screened.raw_infeasible ? 1.0 : 0.0;
  out.report.fixed_count = static_cast<int>(fixes.size());
  out.report.time_reference = reference.wall_seconds;
  out.report.time_pipeline = t_pipe;
  out.report.time_factor = reference.wall_seconds / std::max(t_pipe, 1e-9);

  if (reference.status == SolveStatus::Optimal &&
      (solved.status == SolveStatus::Optimal ||
       solved.status == SolveStatus::TimeLimit)) {
    const double denom = std::max(std::abs(reference.objective), 1e-12);
    out.report.gap = (solved.objective - reference.objective) / denom;
  }

  // prediction accuracy against the reference optimum (binaries only)
  if (reference.status == SolveStatus::Optimal) {
    long match = 0, total = 0, match_fixed = 0, total_fixed = 0;
    for (int j = 0; j < inst.items(); ++j)
      for (int node = 0; node < inst.tree.node_count(); ++node) {
        const int var = setup_index(inst.kind, inst.items(), j, node);
        const double pred = node_probs[j][node] >= 0.5 ? 1.0 : 0.0;
        const double opt = std::round(reference.x[var]);
        ++total;
        if (pred == opt) ++match;
        auto it = screened.fixes.find(var);
        if (it != screened.fixes.end()) {
          ++total_fixed;
          if (it->second == opt) ++match_fixed;
        }
      }
    out.report.accuracy = static_cast<double>(match) / total;
    out.report.accuracy_fixed_only =
        total_fixed > 0 ? static_cast<double>(match_fixed) / total_fixed : 1.0;
  }

  if (!solved.x.empty())
    out.solution = solution_from_assignment(inst, solved.x, solved.objective);
  return out;
}

Dataset make_dataset(const DatasetSpec& spec) {
  Dataset out;
  for (int i = 0; i < spec.count; ++i) {
    const std::uint64_t seed = spec.seed + static_cast<std::uint64_t>(i);
    StochasticInstance inst;
    if (spec.kind == InstanceKind::Mclsp) {
      const MclspInstance base =
          generate_mclsp(seed, spec.items, spec.horizon, spec.ranges);
      if (spec.branching.empty()) {
        inst.kind = InstanceKind::Mclsp;
        inst.mclsp = base;
        inst.tree = chain_tree(base.horizon, base.items);
      } else {
        inst = make_stochastic(base, spec.branching, seed);
      }
    } else {
      const MsmkInstance base =
          generate_msmk(seed, spec.items, spec.horizon, spec.ranges);
      if (spec.branching.empty()) {
        inst.kind = InstanceKind::Msmk;
        inst.msmk = base;
        inst.tree = chain_tree(base.horizon, base.items);
      } else {
        inst = make_stochastic(base, spec.branching, seed);
      }
    }

    const MipModel mip = build_extensive_form(inst);
    BnbOptions opts;
    opts.time_limit_seconds = spec.solver_time_limit;
    const MipResult res = branch_and_bound(mip, opts);
    if (res.status != SolveStatus::Optimal) {
      std::ostringstream reason;
      reason << "instance " << i << ": excluded, solver status "
             << status_name(res.status);
      out.skipped.push_back(reason.str());
      continue;
    }

    DatasetEntry entry;
    entry.instance = inst;
    entry.optimum = solution_from_assignment(inst, res.x, res.objective);
    entry.sample.features = make_features(inst);
    entry.sample.targets = make_targets(inst, entry.optimum);
    entry.sample.tree = inst.tree;
    out.entries.push_back(std::move(entry));
  }
  return out;
}

void write_metrics_csv(
    const std::vector<std::pair<std::string, PipelineReport>>& rows,
    std::ostream& out) {
  out << "id,accuracy,accuracy_fixed,gap,infeas_before_repair,repair_actions,"
         "fixed_count,status,time_ref_s,time_pipe_s,time_factor\n";
  for (const auto& [id, r] : rows) {
    out << id << "," << fmt17(r.accuracy) << "," << fmt17(r.accuracy_fixed_only)
        << "," << fmt17(r.gap) << "," << fmt17(r.infeasible_before_repair)
        << "," << r.repair_actions << "," << r.fixed_count << ","
        << status_name(r.status) << "," << fmt17(r.time_reference) << ","
        << fmt17(r.time_pipeline) << "," << fmt17(r.time_factor) << "\n";
  }
}

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

void write_summary_json(
    const std::vector<std::pair<std::string, PipelineReport>>& rows,
    std::ostream& out) {
  std::vector<double> acc, gap, factor, infeas;
  for (const auto& [id, r] : rows) {
    (void)id;
    acc.push_back(r.accuracy);
    gap.push_back(r.gap);
    factor.push_back(r.time_factor);
    infeas.push_back(r.infeasible_before_repair);
  }
  out << "{\"instances\":" << rows.size()
      << ",\"accuracy\":{\"median\":" << fmt17(median(acc))
      << ",\"mean\":" << fmt17(mean(acc))
      << "},\"gap\":{\"median\":" << fmt17(median(gap))
      << ",\"mean\":" << fmt17(mean(gap))
      << "},\"time_factor\":{\"median\":" << fmt17(median(factor))
      << ",\"mean\":" << fmt17(mean(factor))
      << "},\"infeasible_before_repair_rate\":" << fmt17(mean(infeas))
      << "}\n";
}

}  // namespace scenopt
