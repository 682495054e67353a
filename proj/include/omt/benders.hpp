#pragma once
// Decomposition of the facility-tree family: a master over allocations
// with a tree-cost surrogate mu, and a tree subproblem on fixed openings.
//
// Master:  the facility-tree allocation model with its sorting rows, the
// tree variables dropped and a single surrogate  mu >= 0  added to the
// objective; optimality cuts bound mu from below.
//
// Subproblem (fixed opening vector xbar):
//     min  sum_{i<j} c_ij z_ij
//     s.t. z_ij <= xbar_i                     (tau_ij)
//          z_ij <= xbar_j                     (eta_ij)
//          sum z_ij = p - 1                   (alpha)
//          z_ik + sum_{j != i,k} q_kij <= 1   (beta_ki,  k != i)
//          q_kij + q_kji = z_ij               (gamma
//                                              ^k_ij, i<j, i,j != k)
//          z, q >= 0
// The orientation variables make the selected edge set acyclic, so the
// optimum equals the minimum spanning tree cost of the open facilities.
// Its dual maximizes  alpha (p-1) - sum beta - sum (xbar_i tau + xbar_j
// eta)  and any dual-feasible point stays feasible for every opening
// vector (xbar appears in the objective only), which yields the cuts.
//
// Two optimality-cut families, both of the shape
//     mu >= rhs - sum_t coef_t x_tt :
//  * dual      coef_t = (sum_{j>t} tau_tj + sum_{i<t} eta_it)/(p-1),
//              rhs    = alpha - (sum beta)/(p-1)
//  * classical coef_t = -theta for t in the generator, 0 elsewhere,
//              rhs    = -theta (p-1),  theta = tree cost/(p-1),
// tight at the generating opening vector and valid everywhere.
//
// The loop keeps a lower bound from the master and an upper bound from
// evaluating the master's opening set exactly; it adds one cut per
// round, deduplicates cuts by generator set, and stops when the bounds
// meet — after at most (number of p-subsets) + 1 rounds.

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <vector>

#include "omt/formulations.hpp"
#include "omt/instance.hpp"
#include "omt/model.hpp"

namespace omt {

enum class CutKind { Classical, Dual };

struct BendersCut {
  CutKind kind = CutKind::Dual;
  std::vector<int> generator;   // opening set that produced the cut, sorted
  std::vector<double> x_coef;   // length n, coefficient of x_tt
  double rhs = 0.0;

  // Lower bound the cut imposes on mu at an integer opening set.
  double bound_at(const std::vector<int>& subset) const;
};

struct SubproblemDuals {
  double objective = 0.0;  // equals the tree cost of the open facilities
  double alpha = 0.0;
  std::vector<std::vector<double>> beta;  // beta[k][i], k != i
  std::vector<std::vector<double>> tau;   // tau[i][j], i < j
  std::vector<std::vector<double>> eta;   // eta[i][j], i < j
};

struct BendersOptions {
  CutKind cut = CutKind::Dual;
  double max_time = std::numeric_limits<double>::infinity();  // seconds
  double max_gap = 1e-9;         // relative UB-LB gap at termination
  double master_time = std::numeric_limits<double>::infinity();
  double master_gap = 0.0;       // accepted relative master gap
  std::uint64_t max_iterations = 0;  // 0: number of p-subsets + 1
  bool trace = true;
};

struct BendersIterate {
  std::uint64_t iteration = 0;  // 1-based
  double lower = 0.0;
  double upper = 0.0;
  std::vector<int> subset;  // opening set examined this round
  CutKind kind = CutKind::Dual;
};

struct BendersResult {
  Solution best;
  double objective = std::numeric_limits<double>::infinity();
  double lower_bound = 0.0;
  double upper_bound = std::numeric_limits<double>::infinity();
  std::vector<BendersCut> pool;     // deduplicated by generator set
  std::vector<BendersIterate> trace;
  std::uint64_t iterations = 0;
  bool converged = false;
};

// The master model: allocation + sorting rows with surrogate mu.
Model build_master(const Instance& inst, SortingScheme sorting);

// Tree subproblem on a fixed opening vector (diagonal of the allocation
// matrix), as a continuous model; and its dual, built explicitly.
Model build_km_primal(const Instance& inst,
                      const std::vector<double>& open_diag);
Model build_sp_dual(const Instance& inst,
                    const std::vector<double>& open_diag);

// Solves the primal subproblem and extracts the dual values per row
// family.  For an integer opening vector the objective equals the
// minimum spanning tree cost of the open set.
SubproblemDuals solve_subproblem(const Instance& inst,
                                 const std::vector<double>& open_diag);

BendersCut make_cut(const Instance& inst, CutKind kind,
                    const std::vector<int>& generator,
                    const SubproblemDuals& duals);

// Appends pool cuts to a master model as rows  mu + sum coef x_tt >= rhs
// named cut_1, cut_2, ...
void add_cut_rows(Model& master, const std::vector<BendersCut>& pool);

// The full loop.  The master is solved exactly by enumerating opening
// sets with nearest allocations, bounding mu by the pool.
BendersResult benders_solve(const Instance& inst,
                            const BendersOptions& opts = {});

// Runs the loop under the given limits and returns the resulting cut
// pool for seeding a later solve; a zero time budget yields no cuts.
std::vector<BendersCut> warm_start(const Instance& inst,
                                   const BendersOptions& opts);

// Bound trace as CSV: iteration,LB,UB,subset,cut_kind (subset 1-based,
// joined with '+').
void write_bound_trace(std::ostream& out, const BendersResult& res);

}  // namespace omt
