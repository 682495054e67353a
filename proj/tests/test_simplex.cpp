// Linear-programming solver tests: hand-checked optima with their duals,
// the strong-duality identity under general bounds, infeasible and
// unbounded detection, degenerate pivoting, and the size envelope.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "omt/simplex.hpp"

using namespace omt;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

// Recomputes b'y + sum_{d>0} d*l + sum_{d<0} d*u from the reported duals
// and reduced costs; strong duality makes it match the primal objective.
double dual_value(const LpProblem& lp, const LpResult& r) {
  double v = 0.0;
  for (size_t i = 0; i < lp.rows.size(); ++i) v += lp.rows[i].rhs * r.duals[i];
  for (size_t j = 0; j < lp.objective.size(); ++j) {
    double d = r.reduced_costs[j];
    if (d > 1e-6 && lp.lower[j] != -kInf) v += d * lp.lower[j];
    if (d < -1e-6 && lp.upper[j] != kInf) v += d * lp.upper[j];
  }
  return v;
}

}  // namespace

TEST_CASE("two-variable minimum with known duals") {
  // min -x - 2y  s.t.  x + y <= 4,  y <= 3,  x,y >= 0.
  // Optimum (1,3) value -7; first row dual -1, second -1.
  LpProblem lp;
  lp.add_var(-1, 0, kInf);
  lp.add_var(-2, 0, kInf);
  lp.add_row({{0, 1}, {1, 1}}, LpSense::LE, 4);
  lp.add_row({{1, 1}}, LpSense::LE, 3);
  LpResult r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == doctest::Approx(-7));
  CHECK(r.x[0] == doctest::Approx(1));
  CHECK(r.x[1] == doctest::Approx(3));
  CHECK(r.duals[0] == doctest::Approx(-1));
  CHECK(r.duals[1] == doctest::Approx(-1));
  CHECK(r.dual_objective == doctest::Approx(-7));
  // Both variables are basic: zero reduced cost.
  CHECK(std::abs(r.reduced_costs[0]) < 1e-6);
  CHECK(std::abs(r.reduced_costs[1]) < 1e-6);
}

TEST_CASE("maximization reports duals in the flipped convention") {
  // max 3x + 5y  s.t.  x <= 4,  2y <= 12,  3x + 2y <= 18,  x,y >= 0.
  // Optimum (2,6) value 36; duals (0, 3/2, 1).
  LpProblem lp;
  lp.maximize = true;
  lp.add_var(3, 0, kInf);
  lp.add_var(5, 0, kInf);
  lp.add_row({{0, 1}}, LpSense::LE, 4);
  lp.add_row({{1, 2}}, LpSense::LE, 12);
  lp.add_row({{0, 3}, {1, 2}}, LpSense::LE, 18);
  LpResult r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == doctest::Approx(36));
  CHECK(r.x[0] == doctest::Approx(2));
  CHECK(r.x[1] == doctest::Approx(6));
  CHECK(r.duals[0] == doctest::Approx(0));
  CHECK(r.duals[1] == doctest::Approx(1.5));
  CHECK(r.duals[2] == doctest::Approx(1));
  CHECK(r.dual_objective == doctest::Approx(36));
}

TEST_CASE("equality rows and free variables") {
  // min x + y  s.t.  x + y = 5,  x - y >= 1,  y free, x >= 0.
  // Any point on x+y=5 with x-y>=1 costs 5; duals: equality row 1,
  // inequality row 0.
  LpProblem lp;
  lp.add_var(1, 0, kInf);
  lp.add_var(1, -kInf, kInf);
  lp.add_row({{0, 1}, {1, 1}}, LpSense::EQ, 5);
  lp.add_row({{0, 1}, {1, -1}}, LpSense::GE, 1);
  LpResult r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == doctest::Approx(5));
  CHECK(r.x[0] + r.x[1] == doctest::Approx(5));
  CHECK(r.x[0] - r.x[1] >= 1 - 1e-7);
  CHECK(r.dual_objective == doctest::Approx(5));
  CHECK(dual_value(lp, r) == doctest::Approx(5));
}

TEST_CASE("finite bounds enter the dual through reduced costs") {
  // min -x - y  s.t.  x + y <= 3,  0 <= x <= 2, 0 <= y <= 2.
  // Optimum value -3 on the segment between (1,2) and (2,1).
  LpProblem lp;
  lp.add_var(-1, 0, 2);
  lp.add_var(-1, 0, 2);
  lp.add_row({{0, 1}, {1, 1}}, LpSense::LE, 3);
  LpResult r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == doctest::Approx(-3));
  CHECK(r.dual_objective == doctest::Approx(-3));
  CHECK(dual_value(lp, r) == doctest::Approx(-3));

  // Push both bounds into the optimum: min -x - y with x,y <= 2 only.
  LpProblem box;
  box.add_var(-1, 0, 2);
  box.add_var(-1, 0, 2);
  box.add_row({{0, 1}, {1, 1}}, LpSense::LE, 10);
  LpResult rb = solve_lp(box);
  REQUIRE(rb.status == LpStatus::Optimal);
  CHECK(rb.objective == doctest::Approx(-4));
  CHECK(rb.x[0] == doctest::Approx(2));
  CHECK(rb.x[1] == doctest::Approx(2));
  CHECK(rb.duals[0] == doctest::Approx(0));
  // At an upper bound the reduced cost is negative and prices the bound.
  CHECK(rb.reduced_costs[0] == doctest::Approx(-1));
  CHECK(rb.reduced_costs[1] == doctest::Approx(-1));
  CHECK(dual_value(box, rb) == doctest::Approx(-4));
}

TEST_CASE("negative lower bounds and shifted optima") {
  // min x  s.t.  x >= -5 (bound),  x + y >= -3,  y <= 1.
  // Optimum x = -4 with y at its cap.
  LpProblem lp;
  lp.add_var(1, -5, kInf);
  lp.add_var(0, -kInf, 1);
  lp.add_row({{0, 1}, {1, 1}}, LpSense::GE, -3);
  LpResult r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == doctest::Approx(-4));
  CHECK(r.x[0] == doctest::Approx(-4));
  CHECK(r.x[1] == doctest::Approx(1));
  CHECK(r.dual_objective == doctest::Approx(-4));
  CHECK(dual_value(lp, r) == doctest::Approx(-4));
}

TEST_CASE("infeasibility: contradictory rows and crossed bounds") {
  LpProblem rows;
  rows.add_var(1, 0, kInf);
  rows.add_row({{0, 1}}, LpSense::LE, 1);
  rows.add_row({{0, 1}}, LpSense::GE, 2);
  CHECK(solve_lp(rows).status == LpStatus::Infeasible);

  LpProblem bounds;
  bounds.add_var(1, 3, 2);  // lower above upper
  CHECK(solve_lp(bounds).status == LpStatus::Infeasible);

  LpProblem mixed;
  mixed.add_var(0, 0, 1);
  mixed.add_var(0, 0, 1);
  mixed.add_row({{0, 1}, {1, 1}}, LpSense::EQ, 3);  // caps sum to 2
  CHECK(solve_lp(mixed).status == LpStatus::Infeasible);
}

TEST_CASE("unbounded rays are detected") {
  LpProblem lp;
  lp.add_var(-1, 0, kInf);
  lp.add_var(0, 0, kInf);
  lp.add_row({{0, 1}, {1, -1}}, LpSense::LE, 1);  // x can chase y upward
  CHECK(solve_lp(lp).status == LpStatus::Unbounded);

  LpProblem down;
  down.maximize = true;
  down.add_var(1, -kInf, kInf);
  down.add_row({{0, -1}}, LpSense::LE, 0);  // only x >= 0 restrains nothing
  CHECK(solve_lp(down).status == LpStatus::Unbounded);
}

TEST_CASE("degenerate vertex: the classic cycling example terminates") {
  // Beale's cycling LP: cycles under naive most-negative pivoting without
  // an anti-cycling fallback.
  LpProblem lp;
  lp.add_var(-0.75, 0, kInf);
  lp.add_var(150, 0, kInf);
  lp.add_var(-0.02, 0, kInf);
  lp.add_var(6, 0, kInf);
  lp.add_row({{0, 0.25}, {1, -60}, {2, -1.0 / 25.0}, {3, 9}}, LpSense::LE, 0);
  lp.add_row({{0, 0.5}, {1, -90}, {2, -1.0 / 50.0}, {3, 3}}, LpSense::LE, 0);
  lp.add_row({{2, 1}}, LpSense::LE, 1);
  LpResult r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(r.objective == doctest::Approx(-0.05));
  CHECK(r.x[2] == doctest::Approx(1));
  CHECK(r.dual_objective == doctest::Approx(-0.05));
}

TEST_CASE("strong duality holds on random boxed problems") {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> coef(-5.0, 5.0);
  std::uniform_int_distribution<int> nv(2, 6), nr(1, 5), pick(0, 2);
  int optimal_seen = 0;
  for (int rep = 0; rep < 60; ++rep) {
    LpProblem lp;
    int vars = nv(rng);
    for (int j = 0; j < vars; ++j) {
      double lo = -std::abs(coef(rng));
      double hi = lo + std::abs(coef(rng)) + 0.5;
      lp.add_var(coef(rng), lo, hi);  // finite box keeps it bounded
    }
    int rows = nr(rng);
    for (int i = 0; i < rows; ++i) {
      std::vector<std::pair<int, double>> terms;
      for (int j = 0; j < vars; ++j) terms.push_back({j, coef(rng)});
      LpSense sense = pick(rng) == 0   ? LpSense::LE
                      : pick(rng) == 1 ? LpSense::GE
                                       : LpSense::EQ;
      // rhs drawn wide enough that many instances stay feasible
      lp.add_row(terms, sense, coef(rng) * 2.0);
    }
    LpResult r = solve_lp(lp);
    if (r.status != LpStatus::Optimal) continue;
    ++optimal_seen;
    CHECK(std::abs(r.objective - r.dual_objective) <=
          1e-6 * (1.0 + std::abs(r.objective)));
    CHECK(std::abs(r.objective - dual_value(lp, r)) <=
          1e-6 * (1.0 + std::abs(r.objective)));
    // Primal feasibility of the reported point.
    for (const LpRow& row : lp.rows) {
      double lhs = 0.0;
      for (auto [j, a] : row.terms) lhs += a * r.x[j];
      if (row.sense == LpSense::LE) CHECK(lhs <= row.rhs + 1e-6);
      if (row.sense == LpSense::GE) CHECK(lhs >= row.rhs - 1e-6);
      if (row.sense == LpSense::EQ) CHECK(lhs == doctest::Approx(row.rhs));
    }
    for (size_t j = 0; j < lp.objective.size(); ++j) {
      CHECK(r.x[j] >= lp.lower[j] - 1e-7);
      CHECK(r.x[j] <= lp.upper[j] + 1e-7);
    }
  }
  // The draw must actually exercise the solver.
  CHECK(optimal_seen >= 20);
}

TEST_CASE("size envelope is enforced") {
  LpProblem wide;
  for (int j = 0; j < 2001; ++j) wide.add_var(1, 0, 1);
  CHECK_THROWS_WITH_AS(solve_lp(wide), doctest::Contains("lp size"),
                       OmtError);

  LpProblem tall;
  tall.add_var(1, 0, 1);
  for (int i = 0; i < 6001; ++i) tall.add_row({{0, 1}}, LpSense::LE, 1);
  CHECK_THROWS_WITH_AS(solve_lp(tall), doctest::Contains("lp size"),
                       OmtError);
}
