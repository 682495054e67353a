#pragma once
// Problem data model for the ordered median tree location problem.
//
// An instance is a complete network on n nodes with symmetric nonnegative
// costs c_ij (zero diagonal: self service is free), a facility count p and a
// rank-weight vector lambda.  A solution opens p facilities, allocates every
// node to an open facility (facilities serve themselves) and connects the
// facilities with a spanning tree.  Its value is
//
//     (1/sum(lambda)) * sum_l lambda_l * d_(l)  +  (1/(p-1)) * sum_tree c_ij
//
// where d_(1) <= ... <= d_(n) are the allocation costs in nondecreasing
// order: the average of the rank-compensated allocation costs plus the
// average cost of a tree edge.
//
// Node ids are 0-based in memory and 1-based in every file format and
// printout.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "omt/common.hpp"

namespace omt {

using CostMatrix = std::vector<std::vector<double>>;

// Rank-weight families used throughout: median weighs every rank equally,
// k-centrum only the largest ranks, k-trimmed a middle band.
enum class Criterion { Median, KCentrum, KTrimmed };

std::string criterion_name(Criterion c);
std::optional<Criterion> parse_criterion(const std::string& name);

// Weight vector of length n for the given criterion:
//   median    -> (1,...,1)
//   k_centrum -> floor(2n/3) zeros then ones
//   k_trimmed -> floor(n/3) zeros, ones, floor(n/3) zeros
std::vector<double> build_lambda(Criterion criterion, int n);

struct Instance {
  int n = 0;                       // node count
  int p = 0;                       // facilities to open, 2 <= p <= n
  CostMatrix cost;                 // n x n, symmetric, zero diagonal
  std::vector<double> lambda;      // n nonnegative rank weights, sum > 0
  std::string criterion;           // optional label for provenance
  std::optional<long long> seed;   // optional generator seed for provenance

  double lambda_sum() const;
  // Throws OmtError naming the violated requirement (shape, symmetry,
  // diagonal, negativity, p range, lambda sign/sum).
  void validate() const;
};

struct Solution {
  std::vector<int> facilities;                  // sorted, exactly p ids
  std::vector<int> alloc;                       // alloc[i] = facility serving i
  std::vector<std::pair<int, int>> tree_edges;  // p-1 facility pairs, i < j

  // Throws OmtError naming the violated requirement: facility count,
  // self-service, allocation targets open, tree spans exactly the
  // facility set with p-1 edges and no cycles.
  void validate(const Instance& inst) const;
};

// Ordered median value of a feasible solution (validates first).
double evaluate_objective(const Instance& inst, const Solution& sol);

// Percentage gaps between bound pairs, named after the result-table columns:
//   gUL      = 100 (objU - objL) / objU            final bounds of one run
//   gUR      = 100 (objU_best - objR) / objU_best  best bound vs relaxation
//   gULbar   = 100 (objU - objL_best) / objU       final upper vs best lower
//   gUL_term = 100 (objU_best - objL) / objU_best  best upper vs final lower
struct GapMetrics {
  double gUR = 0.0;
  double gUL = 0.0;
  double gULbar = 0.0;
  double gUL_term = 0.0;
};

// Throws OmtError if a needed denominator is not strictly positive.
GapMetrics gap_metrics(double objU, double objL, double objU_best, double objR,
                       double objL_best);

// Random instance: symmetric integer costs uniform in [cost_lo, cost_hi] on
// the upper triangle, zero diagonal, lambda from the criterion.  Identical
// seeds give identical instances.
Instance generate_instance(int n, int p, unsigned long long rng_seed,
                           Criterion criterion = Criterion::Median,
                           long cost_lo = 1, long cost_hi = 100000);

// JSON instance schema:
//   {"n":int, "p":int, "cost":[[...]], "lambda":[...],
//    "criterion":str?, "seed":int?}
Instance parse_instance_json(const std::string& text);
Instance load_instance_json(const std::string& path);
std::string instance_to_json(const Instance& inst);
void save_instance_json(const Instance& inst, const std::string& path);

// JSON solution schema (all ids 1-based):
//   {"facilities":[...], "allocation":[...n...],
//    "tree_edges":[[i,j],...], "objective":number}
Solution parse_solution_json(const std::string& text, int n);
Solution load_solution_json(const std::string& path, int n);
std::string solution_to_json(const Solution& sol, double objective);
void save_solution_json(const Solution& sol, double objective,
                        const std::string& path);

}  // namespace omt
