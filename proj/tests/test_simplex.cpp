#include <doctest.h>

#include <sstream>

#include "scenopt/simplex.hpp"

using namespace scenopt;

namespace {

MipModel small_lp() {
  // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18 (min form negated);
  // optimum (2, 6) with value 36
  MipModel m;
  m.vars.push_back({"x", 0.0, kInf, false, -3.0});
  m.vars.push_back({"y", 0.0, kInf, false, -5.0});
  m.rows.push_back({{{0, 1.0}}, RowSense::LessEqual, 4.0});
  m.rows.push_back({{{1, 2.0}}, RowSense::LessEqual, 12.0});
  m.rows.push_back({{{0, 3.0}, {1, 2.0}}, RowSense::LessEqual, 18.0});
  return m;
}

}  // namespace

TEST_CASE("textbook LP solves to the known optimum") {
  const LpResult r = simplex_solve(small_lp());
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.objective == doctest::Approx(-36.0));
  CHECK(r.x[0] == doctest::Approx(2.0));
  CHECK(r.x[1] == doctest::Approx(6.0));
}

TEST_CASE("equality and >= rows are handled") {
  // min x + y s.t. x + y = 3, x >= 1 -> (1, 2), value 3... any split works,
  // so only the objective is pinned
  MipModel m;
  m.vars.push_back({"x", 0.0, kInf, false, 1.0});
  m.vars.push_back({"y", 0.0, kInf, false, 1.0});
  m.rows.push_back({{{0, 1.0}, {1, 1.0}}, RowSense::Equal, 3.0});
  m.rows.push_back({{{0, 1.0}}, RowSense::GreaterEqual, 1.0});
  const LpResult r = simplex_solve(m);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.objective == doctest::Approx(3.0));
  CHECK(r.x[0] + r.x[1] == doctest::Approx(3.0));
  CHECK(r.x[0] >= 1.0 - 1e-9);
}

TEST_CASE("infeasible system is detected in phase one") {
  MipModel m;
  m.vars.push_back({"x", 0.0, kInf, false, 1.0});
  m.rows.push_back({{{0, 1.0}}, RowSense::LessEqual, 1.0});
  m.rows.push_back({{{0, 1.0}}, RowSense::GreaterEqual, 2.0});
  CHECK(simplex_solve(m).status == SolveStatus::Infeasible);
}

TEST_CASE("unbounded direction is detected") {
  MipModel m;
  m.vars.push_back({"x", 0.0, kInf, false, -1.0});
  m.rows.push_back({{{0, 1.0}}, RowSense::GreaterEqual, 1.0});
  CHECK(simplex_solve(m).status == SolveStatus::Unbounded);
}

TEST_CASE("finite variable bounds bind") {
  MipModel m;
  m.vars.push_back({"x", 1.0, 2.5, false, -1.0});
  const LpResult r = simplex_solve(m);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.x[0] == doctest::Approx(2.5));
  CHECK(r.objective == doctest::Approx(-2.5));
}

TEST_CASE("fixed variables are substituted out") {
  MipModel m = small_lp();
  m.vars[0].is_binary = true;
  m.vars[0].ub = 1.0;
  FixSet fixes{{0, 1.0}};
  const LpResult r = simplex_solve(m, fixes);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.x[0] == 1.0);
  // with x pinned at 1: y = 6 from row 2, value 3 + 30
  CHECK(r.objective == doctest::Approx(-33.0));
}

TEST_CASE("bounded variant tightens the box") {
  const MipModel m = small_lp();
  std::vector<double> lb{0.0, 0.0}, ub{kInf, 3.0};
  const LpResult r = simplex_solve_bounded(m, lb, ub);
  REQUIRE(r.status == SolveStatus::Optimal);
  // y capped at 3 -> x = 4, value 12 + 15
  CHECK(r.x[1] == doctest::Approx(3.0));
  CHECK(r.objective == doctest::Approx(-27.0));
}

TEST_CASE("degenerate Beale-style problem terminates (Bland's rule)") {
  // classic cycling example for the most-negative-cost rule
  MipModel m;
  const double c[4] = {-0.75, 150.0, -0.02, 6.0};
  for (int i = 0; i < 4; ++i)
    m.vars.push_back({"x" + std::to_string(i), 0.0, kInf, false, c[i]});
  m.rows.push_back(
      {{{0, 0.25}, {1, -60.0}, {2, -1.0 / 25.0}, {3, 9.0}}, RowSense::LessEqual, 0.0});
  m.rows.push_back(
      {{{0, 0.5}, {1, -90.0}, {2, -1.0 / 50.0}, {3, 3.0}}, RowSense::LessEqual, 0.0});
  m.rows.push_back({{{2, 1.0}}, RowSense::LessEqual, 1.0});
  const LpResult r = simplex_solve(m);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.objective == doctest::Approx(-0.05));
}

TEST_CASE("objective offset is carried through") {
  MipModel m;
  m.vars.push_back({"x", 0.0, 1.0, false, 2.0});
  m.obj_offset = 5.0;
  const LpResult r = simplex_solve(m);
  CHECK(r.objective == doctest::Approx(5.0));
}

TEST_CASE("lp export uses a fixed field order") {
  MipModel m = small_lp();
  std::stringstream a, b;
  write_lp(m, a);
  write_lp(m, b);
  CHECK(a.str() == b.str());
  CHECK(a.str().find("Minimize") != std::string::npos);
}
