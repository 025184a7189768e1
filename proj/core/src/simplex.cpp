#include "scenopt/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace scenopt {

namespace {

constexpr double kPivotTol = 1e-9;

// Dense tableau in canonical form: rows[i] holds the constraint
// coefficients plus rhs in the last column; cost[] is the reduced-cost row
// with the (negated) objective value in the last slot.
struct Tableau {
  int cols = 0;  // structural + slack/artificial columns (excl. rhs)
  std::vector<std::vector<double>> rows;
  std::vector<double> cost;
  std::vector<int> basis;  // basic column per row

  void pivot(int r, int c) {
    auto& prow = rows[r];
    const double p = prow[c];
    for (double& v : prow) v /= p;
    for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
      if (i == r) continue;
      const double f = rows[i][c];
      if (f == 0.0) continue;
      for (int j = 0; j <= cols; ++j) rows[i][j] -= f * prow[j];
    }
    const double f = cost[c];
    if (f != 0.0)
      for (int j = 0; j <= cols; ++j) cost[j] -= f * prow[j];
    basis[r] = c;
  }

  // Bland's rule: entering column = lowest index with negative reduced
  // cost; leaving row = min ratio, ties by lowest basic column index.
  // Returns Optimal, Unbounded, or keeps pivoting.
  SolveStatus run(const std::vector<bool>& allowed) {
    for (;;) {
      int enter = -1;
      for (int j = 0; j < cols; ++j) {
        if (!allowed[j]) continue;
        if (cost[j] < -kPivotTol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return SolveStatus::Optimal;
      int leave = -1;
      double best = 0.0;
      for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
        const double a = rows[i][enter];
        if (a <= kPivotTol) continue;
        const double ratio = rows[i][cols] / a;
        if (leave < 0 || ratio < best - kPivotTol ||
            (ratio < best + kPivotTol && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) return SolveStatus::Unbounded;
      pivot(leave, enter);
    }
  }
};

}  // namespace

LpResult simplex_solve_bounded(const MipModel& model,
                               const std::vector<double>& lb,
                               const std::vector<double>& ub) {
  const int n = model.num_vars();
  if (static_cast<int>(lb.size()) != n || static_cast<int>(ub.size()) != n)
    throw std::invalid_argument("simplex: bound vector size mismatch");

  // Shift each free variable to x = lb + x' (x' >= 0); substitute fixed
  // variables out. col_of[v] is the structural column or -1 when fixed.
  std::vector<int> col_of(n, -1);
  std::vector<double> shift(n);
  int n_struct = 0;
  for (int v = 0; v < n; ++v) {
    if (lb[v] > ub[v] + 1e-12) {
      return {SolveStatus::Infeasible, 0.0, {}};
    }
    shift[v] = lb[v];
    if (ub[v] - lb[v] > 1e-12) col_of[v] = n_struct++;
  }

  struct StdRow {
    std::vector<double> a;
    RowSense sense;
    double rhs;
  };
  std::vector<StdRow> std_rows;
  auto add_row = [&](const std::vector<double>& a, RowSense sense, double rhs) {
    std_rows.push_back({a, sense, rhs});
  };

  double obj_const = model.obj_offset;
  std::vector<double> cost(n_struct, 0.0);
  for (int v = 0; v < n; ++v) {
    obj_const += model.vars[v].obj * shift[v];
    if (col_of[v] >= 0) cost[col_of[v]] = model.vars[v].obj;
  }

  for (const auto& row : model.rows) {
    std::vector<double> a(n_struct, 0.0);
    double rhs = row.rhs;
    bool any = false;
    for (const auto& [v, coef] : row.coeffs) {
      rhs -= coef * shift[v];
      if (col_of[v] >= 0) {
        a[col_of[v]] += coef;
        if (coef != 0.0) any = true;
      }
    }
    if (!any) {
      // constant row: feasibility check only
      const bool ok = (row.sense == RowSense::LessEqual && rhs >= -1e-9) ||
                      (row.sense == RowSense::Equal && std::abs(rhs) <= 1e-9) ||
                      (row.sense == RowSense::GreaterEqual && rhs <= 1e-9);
      if (!ok) return {SolveStatus::Infeasible, 0.0, {}};
      continue;
    }
    add_row(a, row.sense, rhs);
  }
  // finite upper bounds become rows
  for (int v = 0; v < n; ++v) {
    if (col_of[v] < 0 || ub[v] == kInf) continue;
    std::vector<double> a(n_struct, 0.0);
    a[col_of[v]] = 1.0;
    add_row(a, RowSense::LessEqual, ub[v] - shift[v]);
  }

  const int m = static_cast<int>(std_rows.size());
  // count slack and artificial columns
  int n_slack = 0, n_art = 0;
  for (auto& r : std_rows) {
    if (r.rhs < 0) {
      for (double& v : r.a) v = -v;
      r.rhs = -r.rhs;
      if (r.sense == RowSense::LessEqual)
        r.sense = RowSense::GreaterEqual;
      else if (r.sense == RowSense::GreaterEqual)
        r.sense = RowSense::LessEqual;
    }
    if (r.sense != RowSense::Equal) ++n_slack;
    if (r.sense != RowSense::LessEqual) ++n_art;
  }

  Tableau tab;
  tab.cols = n_struct + n_slack + n_art;
  tab.rows.assign(m, std::vector<double>(tab.cols + 1, 0.0));
  tab.basis.assign(m, -1);
  const int slack0 = n_struct;
  const int art0 = n_struct + n_slack;
  int si = 0, ai = 0;
  for (int i = 0; i < m; ++i) {
    auto& r = std_rows[i];
    for (int j = 0; j < n_struct; ++j) tab.rows[i][j] = r.a[j];
    tab.rows[i][tab.cols] = r.rhs;
    if (r.sense == RowSense::LessEqual) {
      tab.rows[i][slack0 + si] = 1.0;
      tab.basis[i] = slack0 + si++;
    } else if (r.sense == RowSense::GreaterEqual) {
      tab.rows[i][slack0 + si++] = -1.0;
      tab.rows[i][art0 + ai] = 1.0;
      tab.basis[i] = art0 + ai++;
    } else {
      tab.rows[i][art0 + ai] = 1.0;
      tab.basis[i] = art0 + ai++;
    }
  }

  std::vector<bool> allow_all(tab.cols, true);

  if (n_art > 0) {
    // phase 1: minimize the artificial sum
    tab.cost.assign(tab.cols + 1, 0.0);
    for (int j = art0; j < tab.cols; ++j) tab.cost[j] = 1.0;
    for (int i = 0; i < m; ++i)
      if (tab.basis[i] >= art0)
        for (int j = 0; j <= tab.cols; ++j) tab.cost[j] -= tab.rows[i][j];
    const SolveStatus p1 = tab.run(allow_all);
    if (p1 == SolveStatus::Unbounded)
      return {SolveStatus::Infeasible, 0.0, {}};
    if (-tab.cost[tab.cols] > 1e-7) return {SolveStatus::Infeasible, 0.0, {}};
    // drive remaining artificials out of the basis
    for (int i = 0; i < m; ++i) {
      if (tab.basis[i] < art0) continue;
      int piv = -1;
      for (int j = 0; j < art0; ++j)
        if (std::abs(tab.rows[i][j]) > kPivotTol) {
          piv = j;
          break;
        }
      if (piv >= 0) tab.pivot(i, piv);
      // else: redundant row, harmless to keep with the artificial at zero
    }
  }

  // phase 2: original reduced costs, artificials barred
  std::vector<bool> allowed(tab.cols, true);
  for (int j = art0; j < tab.cols; ++j) allowed[j] = false;
  tab.cost.assign(tab.cols + 1, 0.0);
  for (int j = 0; j < n_struct; ++j) tab.cost[j] = cost[j];
  for (int i = 0; i < m; ++i) {
    const int b = tab.basis[i];
    if (b < n_struct && tab.cost[b] != 0.0) {
      const double f = tab.cost[b];
      for (int j = 0; j <= tab.cols; ++j) tab.cost[j] -= f * tab.rows[i][j];
    }
  }
  const SolveStatus p2 = tab.run(allowed);
  if (p2 == SolveStatus::Unbounded) return {SolveStatus::Unbounded, 0.0, {}};

  LpResult res;
  res.status = SolveStatus::Optimal;
  res.x.assign(n, 0.0);
  std::vector<double> xs(n_struct, 0.0);
  for (int i = 0; i < m; ++i)
    if (tab.basis[i] < n_struct) xs[tab.basis[i]] = tab.rows[i][tab.cols];
  double obj = obj_const;
  for (int v = 0; v < n; ++v) {
    res.x[v] = shift[v] + (col_of[v] >= 0 ? xs[col_of[v]] : 0.0);
    obj += model.vars[v].obj * (res.x[v] - shift[v]);
  }
  res.objective = obj;
  return res;
}

LpResult simplex_solve(const MipModel& model, const FixSet& fixes) {
  const int n = model.num_vars();
  std::vector<double> lb(n), ub(n);
  for (int v = 0; v < n; ++v) {
    lb[v] = model.vars[v].lb;
    ub[v] = model.vars[v].ub;
  }
  for (const auto& [v, val] : fixes) {
    if (v < 0 || v >= n || !model.vars[v].is_binary)
      throw std::invalid_argument("simplex: fix on a non-binary variable");
    lb[v] = ub[v] = val;
  }
  return simplex_solve_bounded(model, lb, ub);
}

}  // namespace scenopt
