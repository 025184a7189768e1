#include "scenopt/bnb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "scenopt/simplex.hpp"

namespace scenopt {

namespace {

constexpr double kIntTol = 1e-6;

double assignment_objective(const MipModel& model, const std::vector<double>& x) {
  double obj = model.obj_offset;
  for (int v = 0; v < model.num_vars(); ++v) obj += model.vars[v].obj * x[v];
  return obj;
}

struct Search {
  const MipModel& model;
  std::vector<double> lb, ub;
  double best = kInf;
  std::vector<double> best_x;
  bool have_incumbent = false;
  long nodes = 0;
  bool timed_out = false;
  double frontier_bound = kInf;  // min LP bound over abandoned subtrees
  std::chrono::steady_clock::time_point deadline;
  bool has_deadline = false;

  void dfs() {
    if (timed_out) return;
    if (has_deadline && std::chrono::steady_clock::now() > deadline) {
      timed_out = true;
      return;
    }
    ++nodes;
    const LpResult lp = simplex_solve_bounded(model, lb, ub);
    if (lp.status != SolveStatus::Optimal) return;  // infeasible: prune
    if (have_incumbent && lp.objective >= best - 1e-9) return;

    // most fractional binary, ties by lowest index
    int branch_var = -1;
    double most = kIntTol;
    for (int v = 0; v < model.num_vars(); ++v) {
      if (!model.vars[v].is_binary || lb[v] == ub[v]) continue;
      const double f = lp.x[v] - std::floor(lp.x[v]);
      const double dist = std::min(f, 1.0 - f);
      if (dist > most) {
        most = dist;
        branch_var = v;
      }
    }
    if (branch_var < 0) {
      // integral within tolerance
      std::vector<double> x = lp.x;
      for (int v = 0; v < model.num_vars(); ++v)
        if (model.vars[v].is_binary) x[v] = std::round(x[v]);
      const double obj = assignment_objective(model, x);
      if (!have_incumbent || obj < best) {
        best = obj;
        best_x = std::move(x);
        have_incumbent = true;
      }
      return;
    }

    const int first = lp.x[branch_var] >= 0.5 ? 1 : 0;
    for (int k = 0; k < 2; ++k) {
      const double val = k == 0 ? first : 1 - first;
      const double save_lb = lb[branch_var], save_ub = ub[branch_var];
      lb[branch_var] = ub[branch_var] = val;
      dfs();
      lb[branch_var] = save_lb;
      ub[branch_var] = save_ub;
      if (timed_out) {
        if (k == 0) frontier_bound = std::min(frontier_bound, lp.objective);
        return;
      }
    }
  }
};

}  // namespace

bool check_feasible(const MipModel& model, const std::vector<double>& x,
                    double tol) {
  if (static_cast<int>(x.size()) != model.num_vars()) return false;
  for (int v = 0; v < model.num_vars(); ++v) {
    const auto& var = model.vars[v];
    if (x[v] < var.lb - tol || x[v] > var.ub + tol) return false;
    if (var.is_binary && std::abs(x[v] - std::round(x[v])) > tol) return false;
  }
  for (const auto& row : model.rows) {
    double lhs = 0.0;
    for (const auto& [v, coef] : row.coeffs) lhs += coef * x[v];
    switch (row.sense) {
      case RowSense::LessEqual:
        if (lhs > row.rhs + tol) return false;
        break;
      case RowSense::Equal:
        if (std::abs(lhs - row.rhs) > tol) return false;
        break;
      case RowSense::GreaterEqual:
        if (lhs < row.rhs - tol) return false;
        break;
    }
  }
  return true;
}

MipResult branch_and_bound(const MipModel& model, const BnbOptions& opts) {
  model.validate();
  const auto start = std::chrono::steady_clock::now();

  Search s{model};
  s.lb.resize(model.num_vars());
  s.ub.resize(model.num_vars());
  for (int v = 0; v < model.num_vars(); ++v) {
    s.lb[v] = model.vars[v].lb;
    s.ub[v] = model.vars[v].ub;
  }
  for (const auto& [v, val] : opts.fixes) {
    if (v < 0 || v >= model.num_vars() || !model.vars[v].is_binary)
      throw std::invalid_argument("branch_and_bound: fix on non-binary variable");
    s.lb[v] = s.ub[v] = val;
  }

  if (opts.warm_start) {
    bool ok = check_feasible(model, *opts.warm_start);
    if (ok)  // the warm start must also respect the fixes
      for (const auto& [v, val] : opts.fixes)
        if (std::abs((*opts.warm_start)[v] - val) > kIntTol) ok = false;
    if (ok) {
      s.best = assignment_objective(model, *opts.warm_start);
      s.best_x = *opts.warm_start;
      s.have_incumbent = true;
    } else if (opts.log) {
      opts.log("warm start rejected: infeasible or inconsistent with fixes");
    }
  }

  if (opts.time_limit_seconds != kInf) {
    s.has_deadline = true;
    s.deadline = start + std::chrono::duration_cast<
                             std::chrono::steady_clock::duration>(
                     std::chrono::duration<double>(opts.time_limit_seconds));
  }

  s.dfs();

  MipResult res;
  res.nodes = s.nodes;
  res.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (s.timed_out) {
    res.status = SolveStatus::TimeLimit;
    res.objective = s.have_incumbent ? s.best : kInf;
    res.x = s.best_x;
    res.bound = std::min(s.frontier_bound, res.objective);
  } else if (s.have_incumbent) {
    res.status = SolveStatus::Optimal;
    res.objective = s.best;
    res.x = s.best_x;
    res.bound = s.best;
  } else {
    res.status = SolveStatus::Infeasible;
  }
  return res;
}

MipResult exhaustive_oracle(const MipModel& model) {
  model.validate();
  const auto start = std::chrono::steady_clock::now();
  const auto binaries = model.binary_indices();
  if (binaries.size() > 20)
    throw std::invalid_argument("exhaustive_oracle: more than 20 binaries");

  std::vector<double> lb(model.num_vars()), ub(model.num_vars());
  for (int v = 0; v < model.num_vars(); ++v) {
    lb[v] = model.vars[v].lb;
    ub[v] = model.vars[v].ub;
  }

  MipResult res;
  res.status = SolveStatus::Infeasible;
  double best = kInf;
  const std::uint64_t count = 1ULL << binaries.size();
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    for (std::size_t k = 0; k < binaries.size(); ++k) {
      const double val = (mask >> k) & 1 ? 1.0 : 0.0;
      lb[binaries[k]] = ub[binaries[k]] = val;
    }
    const LpResult lp = simplex_solve_bounded(model, lb, ub);
    ++res.nodes;
    if (lp.status != SolveStatus::Optimal) continue;
    if (res.status == SolveStatus::Infeasible || lp.objective < best) {
      best = lp.objective;
      res.x = lp.x;
      res.status = SolveStatus::Optimal;
    }
  }
  if (res.status == SolveStatus::Optimal) {
    res.objective = best;
    res.bound = best;
  }
  res.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return res;
}

}  // namespace scenopt
