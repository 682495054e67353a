#pragma once
// Unique-cost ladder, covering variables and the maps between the two
// sorting encodings.
//
// A point can express "the l-th smallest allocation cost" either with
// sorted allocation variables x^l_ij (cell (i,j) carries rank l) or with
// covering variables u_lh ("the l-th sorted cost is at least the h-th
// unique cost c_(h)").  This module builds the ladder
// c_(0) := 0 < c_(1) < ... < c_(H) and implements
//
//   f(x^l)  ->  u:   u_lh = sum_{i,j: c_ij >= c_(h)} x^l_ij
//   g(u)    ->  x^l: per-cell min{remaining cell capacity, remaining rung
//                    budget u_lh - u_{l,h+1}}, ranks below l(h) get zero
//   f^{-1}  ->  x^l: telescoping differences along the ladder when every
//                    matrix value is unique (one cell per rung)
//
// plus the staircase inequalities
//   sum_{c_ij >= c_(h)} x^l_ij + sum_{c_ij < c_(h)} x^{l+1}_ij <= 1.
//
// Matrices here may be asymmetric with nonzero diagonal (the maps only
// read cell values); tie bookkeeping (multiplicities, alpha_hat, chi0_hat)
// is defined over the strict upper triangle.

#include <optional>
#include <vector>

#include "omt/instance.hpp"

namespace omt {

struct CostLadder {
  // Distinct nonzero values of the full matrix, strictly increasing;
  // values[h-1] is c_(h) and c_(0) = 0 is implicit.
  std::vector<double> values;
  // Occurrences of each value in the strict upper triangle (0 when a value
  // appears only on or below the diagonal).
  std::vector<int> multiplicities;
  int H_size = 0;     // |H| = values.size()
  int alpha_hat = 0;  // repeated upper-triangle entries beyond the first
  int chi0_hat = 0;   // 1 if some strictly-upper entry is zero
  int n = 0;

  // For symmetric zero-diagonal matrices the upper triangle partitions as
  // |upper| = chi0_hat + H + alpha_hat, i.e. alpha_hat = n(n-1)/2 -
  // chi0_hat - H; asymmetric inputs satisfy the same identity with H
  // replaced by the upper-triangle distinct count.

  // 1-based rung of a value: 0 for zero, h with values[h-1] == v otherwise.
  // Throws OmtError for values that are not on the ladder.
  int rung_of(double v) const;
};

// Ladder over the distinct nonzero entries of the whole matrix, with
// upper-triangle tie bookkeeping.  Values match exactly for integer-cost
// matrices; real-valued inputs dedup at 1e-9 relative.
CostLadder build_cost_ladder(const CostMatrix& cost);

// Point in the sorted-allocation encoding; entries may be fractional.
struct SortedAssignment {
  std::vector<std::vector<double>> x;               // n x n
  std::vector<std::vector<double>> z;               // n x n symmetric
  std::vector<std::vector<std::vector<double>>> xl; // xl[l][i][j], n x n x n
};

// Point in the covering encoding.
struct CoveringAssignment {
  std::vector<std::vector<double>> x;  // n x n
  std::vector<std::vector<double>> z;  // n x n symmetric
  std::vector<std::vector<double>> u;  // u[l][h], n x H
};

// u_lh = sum over cells with c_ij >= c_(h); x and z pass through.
CoveringAssignment map_f(const SortedAssignment& sa, const CostMatrix& cost,
                         const CostLadder& ladder);

// Reconstructs x^l from u rung by rung (zero rung included for self-service
// cells, budget u_l0 := 1).  Requires u nonincreasing in h; throws
// OmtError otherwise.
SortedAssignment map_g(const CoveringAssignment& ca, const CostMatrix& cost,
                       const CostLadder& ladder);

// Telescoping inverse x^l at the unique cell of rung h = u_lh - u_{l,h+1}
// (top rung uses u_lH itself, zero rung u_l0 := 1).  Requires every matrix
// value, zero included, to occupy exactly one cell; throws OmtError when
// ties are present.
SortedAssignment map_f_inverse_noties(const CoveringAssignment& ca,
                                      const CostMatrix& cost,
                                      const CostLadder& ladder);

struct StaircaseViolation {
  int l;       // 0-based rank (pairs rank l with rank l+1)
  int h;       // 1-based rung
  double lhs;  // value exceeding 1
};

// All (h, l) pairs whose staircase left-hand side exceeds 1 + 1e-9.
std::vector<StaircaseViolation> check_staircase(const SortedAssignment& sa,
                                               const CostMatrix& cost,
                                               const CostLadder& ladder);

// Rank-weighted allocation cost in each encoding (no lambda normalization):
//   sum_l lambda_l sum_ij c_ij x^l_ij   and
//   sum_l lambda_l sum_h (c_(h)-c_(h-1)) u_lh.
// The two agree after map_f (the telescoping identity).
double ordered_cost_xl(const std::vector<std::vector<std::vector<double>>>& xl,
                       const CostMatrix& cost,
                       const std::vector<double>& lambda);
double ordered_cost_u(const std::vector<std::vector<double>>& u,
                      const CostLadder& ladder,
                      const std::vector<double>& lambda);

// Covering image of a sorted cost vector: u[l][h-1] = 1 iff d[l] >= c_(h).
std::vector<std::vector<double>> u_from_sorted_costs(
    const std::vector<double>& sorted_costs, const CostLadder& ladder);

// First (l, h) cell violating rank monotonicity u_lh <= u_{l+1,h}, if any;
// l is 0-based, h 1-based.
std::optional<std::pair<int, int>> first_rank_monotonicity_violation(
    const std::vector<std::vector<double>>& u);

}  // namespace omt
