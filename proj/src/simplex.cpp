#include "omt/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace omt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-9;
constexpr double kPhaseOneTol = 1e-7;

bool finite(double v) { return std::isfinite(v); }

// How one user-facing variable is expressed through nonnegative tableau
// variables.
enum class VarKind { Shift, Mirror, Split };

struct VarMap {
  VarKind kind = VarKind::Shift;
  int col = -1;       // primary tableau column
  int neg_col = -1;   // second column of a split free variable
  double offset = 0;  // x = offset + s (Shift) or offset - s (Mirror)
};

struct Tableau {
  int rows = 0;
  int cols = 0;  // excluding rhs
  std::vector<std::vector<double>> t;  // rows + one cost row; last col = rhs
  std::vector<int> basis;              // basic column per row
  std::vector<bool> artificial;        // per column
  std::vector<int> id_col;             // identity column per row (for duals)

  double& at(int r, int c) { return t[r][c]; }
  double& rhs(int r) { return t[r][cols]; }
  double& cost(int c) { return t[rows][c]; }
};

void pivot(Tableau& tb, int prow, int pcol) {
  double piv = tb.at(prow, pcol);
  for (int c = 0; c <= tb.cols; ++c) tb.at(prow, c) /= piv;
  for (int r = 0; r <= tb.rows; ++r) {
    if (r == prow) continue;
    double f = tb.at(r, pcol);
    if (std::fabs(f) < 1e-13) continue;
    for (int c = 0; c <= tb.cols; ++c) tb.at(r, c) -= f * tb.at(prow, c);
  }
  tb.basis[prow] = pcol;
}

int choose_entering(const Tableau& tb, const std::vector<bool>& allowed,
                    bool bland) {
  int best = -1;
  double best_d = -kPivotTol;
  for (int c = 0; c < tb.cols; ++c) {
    if (!allowed[c]) continue;
    double d = tb.t[tb.rows][c];
    if (d < -kPivotTol) {
      if (bland) return c;
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
  }
  return best;
}

int choose_leaving(const Tableau& tb, int pcol) {
  int best = -1;
  double best_ratio = 0;
  for (int r = 0; r < tb.rows; ++r) {
    double a = tb.t[r][pcol];
    if (a <= kPivotTol) continue;
    double ratio = std::max(tb.t[r][tb.cols], 0.0) / a;
    if (best < 0 || ratio < best_ratio - 1e-12) {
      best = r;
      best_ratio = ratio;
    } else if (ratio <= best_ratio + 1e-12) {
      // Degenerate tie: push artificials out first, then lowest basis index
      // (Bland-style) so cycling cannot persist.
      bool cand_art = tb.artificial[tb.basis[r]];
      bool best_art = tb.artificial[tb.basis[best]];
      if (cand_art != best_art ? cand_art : tb.basis[r] < tb.basis[best])
        best = r;
    }
  }
  return best;
}

enum class PhaseOutcome { Converged, Unbounded };

PhaseOutcome run_phase(Tableau& tb, const std::vector<bool>& allowed,
                       long long& iters, long long bland_after,
                       long long iter_cap) {
  while (true) {
    int pcol = choose_entering(tb, allowed, iters > bland_after);
    if (pcol < 0) return PhaseOutcome::Converged;
    int prow = choose_leaving(tb, pcol);
    if (prow < 0) return PhaseOutcome::Unbounded;
    pivot(tb, prow, pcol);
    if (++iters > iter_cap)
      throw OmtError("lp iterations",
                     "simplex exceeded the iteration cap; the problem is "
                     "likely outside the supported envelope");
  }
}

}  // namespace

int LpProblem::add_var(double obj, double lo, double hi) {
  objective.push_back(obj);
  lower.push_back(lo);
  upper.push_back(hi);
  return static_cast<int>(objective.size()) - 1;
}

void LpProblem::add_row(std::vector<std::pair<int, double>> terms,
                        LpSense sense, double rhs) {
  LpRow row;
  row.terms = std::move(terms);
  row.sense = sense;
  row.rhs = rhs;
  rows.push_back(std::move(row));
}

LpResult solve_lp(const LpProblem& lp) {
  const int n = static_cast<int>(lp.objective.size());
  const int m = static_cast<int>(lp.rows.size());
  if (static_cast<int>(lp.lower.size()) != n ||
      static_cast<int>(lp.upper.size()) != n)
    throw OmtError("lp input", "bound arrays must match the variable count");
  for (const LpRow& row : lp.rows) {
    if (!finite(row.rhs)) throw OmtError("lp input", "row rhs must be finite");
    for (auto [j, a] : row.terms) {
      if (j < 0 || j >= n)
        throw OmtError("lp input", "row references an unknown variable");
      if (!finite(a))
        throw OmtError("lp input", "row coefficient must be finite");
    }
  }
  if (n > 2000 || m > 6000)
    throw OmtError("lp size", "problem exceeds the dense-simplex envelope (" +
                                  std::to_string(n) + " vars, " +
                                  std::to_string(m) + " rows)");

  LpResult res;
  for (int j = 0; j < n; ++j) {
    if (lp.lower[j] > lp.upper[j] + 1e-9) {
      res.status = LpStatus::Infeasible;
      return res;
    }
  }

  // Work in minimization space; flip everything at the end for maximize.
  std::vector<double> cmin(lp.objective);
  if (lp.maximize)
    for (double& c : cmin) c = -c;

  // ---- variable transformation to nonnegative tableau variables ----
  std::vector<VarMap> vmap(n);
  int ncols = 0;
  std::vector<double> tcost;  // cost per tableau structural column
  std::vector<int> ub_row_var;  // vars needing an internal upper-bound row
  for (int j = 0; j < n; ++j) {
    double lo = lp.lower[j], hi = lp.upper[j];
    VarMap& vm = vmap[j];
    if (finite(lo)) {
      vm.kind = VarKind::Shift;
      vm.offset = lo;
      vm.col = ncols++;
      tcost.push_back(cmin[j]);
      if (finite(hi)) ub_row_var.push_back(j);
    } else if (finite(hi)) {
      vm.kind = VarKind::Mirror;
      vm.offset = hi;
      vm.col = ncols++;
      tcost.push_back(-cmin[j]);
    } else {
      vm.kind = VarKind::Split;
      vm.col = ncols++;
      vm.neg_col = ncols++;
      tcost.push_back(cmin[j]);
      tcost.push_back(-cmin[j]);
    }
  }
  const int nstruct = ncols;

  // ---- assemble rows: original rows first, then internal bound rows ----
  struct DenseRow {
    std::vector<double> a;
    LpSense sense;
    double rhs;
    double flip = 1.0;  // -1 when the row was negated for a nonnegative rhs
  };
  std::vector<DenseRow> dense;
  dense.reserve(m + ub_row_var.size());
  for (const LpRow& row : lp.rows) {
    DenseRow dr;
    dr.a.assign(nstruct, 0.0);
    dr.sense = row.sense;
    dr.rhs = row.rhs;
    for (auto [j, coef] : row.terms) {
      const VarMap& vm = vmap[j];
      switch (vm.kind) {
        case VarKind::Shift:
          dr.a[vm.col] += coef;
          dr.rhs -= coef * vm.offset;
          break;
        case VarKind::Mirror:
          dr.a[vm.col] -= coef;
          dr.rhs -= coef * vm.offset;
          break;
        case VarKind::Split:
          dr.a[vm.col] += coef;
          dr.a[vm.neg_col] -= coef;
          break;
      }
    }
    dense.push_back(std::move(dr));
  }
  for (int j : ub_row_var) {
    DenseRow dr;
    dr.a.assign(nstruct, 0.0);
    dr.a[vmap[j].col] = 1.0;
    dr.sense = LpSense::LE;
    dr.rhs = lp.upper[j] - lp.lower[j];
    dense.push_back(std::move(dr));
  }
  const int mall = static_cast<int>(dense.size());
  for (DenseRow& dr : dense) {
    if (dr.rhs < 0) {
      for (double& a : dr.a) a = -a;
      dr.rhs = -dr.rhs;
      dr.flip = -1.0;
      dr.sense = dr.sense == LpSense::LE
                     ? LpSense::GE
                     : (dr.sense == LpSense::GE ? LpSense::LE : LpSense::EQ);
    }
  }

  // ---- tableau layout: structural | slack/surplus/artificial | rhs ----
  int extra = 0;
  for (const DenseRow& dr : dense)
    extra += dr.sense == LpSense::GE ? 2 : 1;
  Tableau tb;
  tb.rows = mall;
  tb.cols = nstruct + extra;
  tb.t.assign(mall + 1, std::vector<double>(tb.cols + 1, 0.0));
  tb.basis.assign(mall, -1);
  tb.artificial.assign(tb.cols, false);
  tb.id_col.assign(mall, -1);

  int next = nstruct;
  for (int r = 0; r < mall; ++r) {
    for (int c = 0; c < nstruct; ++c) tb.at(r, c) = dense[r].a[c];
    tb.rhs(r) = dense[r].rhs;
    switch (dense[r].sense) {
      case LpSense::LE:
        tb.at(r, next) = 1.0;  // slack doubles as the identity column
        tb.id_col[r] = next;
        tb.basis[r] = next++;
        break;
      case LpSense::GE:
        tb.at(r, next) = -1.0;  // surplus
        ++next;
        tb.at(r, next) = 1.0;  // artificial
        tb.artificial[next] = true;
        tb.id_col[r] = next;
        tb.basis[r] = next++;
        break;
      case LpSense::EQ:
        tb.at(r, next) = 1.0;  // artificial
        tb.artificial[next] = true;
        tb.id_col[r] = next;
        tb.basis[r] = next++;
        break;
    }
  }

  const long long bland_after = 3LL * (mall + tb.cols) + 1000;
  const long long iter_cap = 200LL * (mall + tb.cols) + 20000;
  long long iters = 0;

  // ---- phase 1: drive the artificials to zero ----
  bool any_artificial = false;
  for (int c = 0; c < tb.cols; ++c) any_artificial |= tb.artificial[c];
  std::vector<bool> allowed(tb.cols, true);
  if (any_artificial) {
    for (int c = 0; c < tb.cols; ++c)
      tb.cost(c) = tb.artificial[c] ? 1.0 : 0.0;
    // Price out the initial basis (artificials are basic with cost one).
    for (int r = 0; r < mall; ++r) {
      if (!tb.artificial[tb.basis[r]]) continue;
      for (int c = 0; c <= tb.cols; ++c) tb.cost(c) -= tb.at(r, c);
    }
    PhaseOutcome out = run_phase(tb, allowed, iters, bland_after, iter_cap);
    if (out == PhaseOutcome::Unbounded)
      throw OmtError("lp numerics", "phase one reported an unbounded ray");
    double infeas = 0;
    for (int r = 0; r < mall; ++r)
      if (tb.artificial[tb.basis[r]]) infeas += std::max(tb.rhs(r), 0.0);
    if (infeas > kPhaseOneTol) {
      res.status = LpStatus::Infeasible;
      res.iterations = static_cast<int>(iters);
      return res;
    }
    // Pivot leftover zero-level artificials out on any usable column; rows
    // that admit none are linearly dependent and harmlessly keep a zero
    // artificial basic (their dual then prices to zero).
    for (int r = 0; r < mall; ++r) {
      if (!tb.artificial[tb.basis[r]]) continue;
      for (int c = 0; c < tb.cols; ++c) {
        if (tb.artificial[c]) continue;
        if (std::fabs(tb.at(r, c)) > kPhaseOneTol) {
          pivot(tb, r, c);
          break;
        }
      }
    }
  }

  // ---- phase 2: original costs, artificials banned ----
  for (int c = 0; c < tb.cols; ++c) {
    allowed[c] = !tb.artificial[c];
    tb.cost(c) = c < nstruct ? tcost[c] : 0.0;
  }
  tb.cost(tb.cols) = 0.0;
  for (int r = 0; r < mall; ++r) {
    double cb = tb.basis[r] < nstruct ? tcost[tb.basis[r]] : 0.0;
    if (cb == 0.0) continue;
    for (int c = 0; c <= tb.cols; ++c) tb.cost(c) -= cb * tb.at(r, c);
  }
  PhaseOutcome out = run_phase(tb, allowed, iters, bland_after, iter_cap);
  res.iterations = static_cast<int>(iters);
  if (out == PhaseOutcome::Unbounded) {
    res.status = LpStatus::Unbounded;
    return res;
  }

  // ---- recover the primal point ----
  std::vector<double> s(tb.cols, 0.0);
  for (int r = 0; r < mall; ++r) s[tb.basis[r]] = std::max(tb.rhs(r), 0.0);
  res.x.assign(n, 0.0);
  for (int j = 0; j < n; ++j) {
    const VarMap& vm = vmap[j];
    switch (vm.kind) {
      case VarKind::Shift: res.x[j] = vm.offset + s[vm.col]; break;
      case VarKind::Mirror: res.x[j] = vm.offset - s[vm.col]; break;
      case VarKind::Split: res.x[j] = s[vm.col] - s[vm.neg_col]; break;
    }
  }
  double obj_min = 0;
  for (int j = 0; j < n; ++j) obj_min += cmin[j] * res.x[j];

  // ---- duals of the user rows from their identity columns ----
  // A slack or artificial identity column e_r with zero cost prices to
  // d = -y_r, so the final cost row hands us the multipliers directly.
  res.duals.assign(m, 0.0);
  for (int r = 0; r < m; ++r)
    res.duals[r] = -tb.cost(tb.id_col[r]) * dense[r].flip;

  // ---- reduced costs against the user rows only ----
  // Internal upper-bound rows are deliberately excluded: their multipliers
  // surface as the negative parts of these reduced costs, which is exactly
  // what the bound terms of the dual objective below consume.
  res.reduced_costs.assign(n, 0.0);
  for (int j = 0; j < n; ++j) res.reduced_costs[j] = cmin[j];
  for (int r = 0; r < m; ++r) {
    double y = res.duals[r];
    if (y == 0.0) continue;
    for (auto [j, a] : lp.rows[r].terms) res.reduced_costs[j] -= y * a;
  }

  double dual_obj = 0;
  for (int r = 0; r < m; ++r) dual_obj += res.duals[r] * lp.rows[r].rhs;
  for (int j = 0; j < n; ++j) {
    double d = res.reduced_costs[j];
    if (d > kOptTol && finite(lp.lower[j])) dual_obj += d * lp.lower[j];
    if (d < -kOptTol && finite(lp.upper[j])) dual_obj += d * lp.upper[j];
  }

  res.status = LpStatus::Optimal;
  res.objective = lp.maximize ? -obj_min : obj_min;
  res.dual_objective = lp.maximize ? -dual_obj : dual_obj;
  if (lp.maximize) {
    for (double& y : res.duals) y = -y;
    for (double& d : res.reduced_costs) d = -d;
  }
  return res;
}

}  // namespace omt
