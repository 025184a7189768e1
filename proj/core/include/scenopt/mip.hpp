#pragma once

#include <iosfwd>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace scenopt {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense { LessEqual, Equal, GreaterEqual };

struct MipVariable {
  std::string name;
  double lb = 0.0;
  double ub = kInf;
  bool is_binary = false;
  double obj = 0.0;
};

struct MipRow {
  std::vector<std::pair<int, double>> coeffs;  // sparse (var index, value)
  RowSense sense = RowSense::LessEqual;
  double rhs = 0.0;
};

// Minimization MIP. Binary variables have bounds [0,1].
struct MipModel {
  std::vector<MipVariable> vars;
  std::vector<MipRow> rows;
  double obj_offset = 0.0;

  int num_vars() const { return static_cast<int>(vars.size()); }
  std::vector<int> binary_indices() const;
  void validate() const;  // throws std::invalid_argument
};

// Fixed binary assignments (variable index -> 0 or 1).
using FixSet = std::map<int, double>;

enum class SolveStatus { Optimal, Feasible, Infeasible, Unbounded, TimeLimit };

struct LpResult {
  SolveStatus status = SolveStatus::Infeasible;
  double objective = 0.0;
  std::vector<double> x;
};

struct MipResult {
  SolveStatus status = SolveStatus::Infeasible;
  double objective = 0.0;
  std::vector<double> x;      // incumbent assignment
  double bound = -kInf;       // best lower bound
  long nodes = 0;             // explored branch-and-bound nodes
  double wall_seconds = 0.0;
};

// Fixed-field-order LP-format text export with 17-digit numerics.
void write_lp(const MipModel& model, std::ostream& out);

}  // namespace scenopt
