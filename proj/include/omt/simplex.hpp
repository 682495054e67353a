#pragma once
// Small dense linear-programming solver with primal and dual solutions.
//
// Scope: desk-scale problems (hundreds of variables, a few thousand rows)
// solved by a two-phase tableau simplex.  General bounds are handled by
// shifting/mirroring/splitting variables; finite upper bounds become
// internal rows, and their multipliers surface as the negative parts of
// the reported reduced costs, which the bound terms below consume.
//
// Dual sign convention (minimization): a <= row has dual <= 0, a >= row
// has dual >= 0, an equality row is free, and
//
//   primal objective = b'y + sum_{d_j > 0} d_j l_j + sum_{d_j < 0} d_j u_j
//
// with d_j = c_j - sum_r y_r a_rj the reduced cost against the original
// rows only.  Maximization problems are solved by negation and reported in
// the flipped convention (a <= row then has dual >= 0).

#include <vector>

#include "omt/common.hpp"

namespace omt {

enum class LpSense { LE, GE, EQ };

struct LpRow {
  std::vector<std::pair<int, double>> terms;  // (variable index, coefficient)
  LpSense sense = LpSense::LE;
  double rhs = 0.0;
};

struct LpProblem {
  bool maximize = false;
  std::vector<double> objective;  // one coefficient per variable
  std::vector<double> lower;      // -infinity allowed
  std::vector<double> upper;      // +infinity allowed
  std::vector<LpRow> rows;

  int add_var(double obj, double lo, double hi);
  void add_row(std::vector<std::pair<int, double>> terms, LpSense sense,
               double rhs);
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double objective = 0.0;
  double dual_objective = 0.0;
  std::vector<double> x;              // per variable
  std::vector<double> duals;          // per row, convention above
  std::vector<double> reduced_costs;  // per variable, against original rows
  int iterations = 0;
};

// Feasibility tolerance 1e-7, optimality 1e-6; deterministic pivoting
// (largest-coefficient rule with a Bland fallback against cycling).
// Throws OmtError when the problem exceeds the supported envelope or the
// iteration cap.
LpResult solve_lp(const LpProblem& lp);

}  // namespace omt
