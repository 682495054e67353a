#pragma once
// Variable fixing for the covering counters ahead of a solve.
//
// For each ladder value c_(h) two worst-case position bounds over all
// p-subsets S of candidate facilities:
//
//   H1_h = max_S [ p + #{ i not in S : min_{j in S} c_ij <= c_(h-1) } ]
//   H0_h = max_S [ p + #{ i not in S : max_{j in S} c_ij >= c_(h)   } ]
//
// In every feasible solution at most H1_h sorted positions can pay less
// than c_(h), so u_l_h = 1 is forced for positions l > H1_h; and at least
// N - H0_h + p positions pay 0 or at least miss c_(h), forcing u_l_h = 0
// for positions l <= N - H0_h + p.  The first p positions are always the
// open facilities' self-allocations at cost 0, which the second rule
// subsumes.  Both bounds are exact maxima, computed by enumerating all
// p-subsets with a rung histogram + prefix sums per subset; the subset
// loop is partitioned over OpenMP workers with an elementwise-max merge.

#include <string>
#include <vector>

#include "omt/covering.hpp"
#include "omt/instance.hpp"
#include "omt/model.hpp"
#include "omt/oracle.hpp"

namespace omt {

enum class FixState { NotFixed, Fixed0, Fixed1 };

struct FixingMatrix {
  int n = 0;
  int H = 0;
  std::vector<std::vector<FixState>> state;  // [position l-1][rung h-1]
  std::vector<int> H1;  // H1[h-1], h = 1..H
  std::vector<int> H0;  // H0[h-1]
  // False when the subset count exceeded the budget and the bounds fell
  // back to the trivial H1 = H0 = n (no fixing beyond the always-zero
  // leading positions).
  bool exact = true;

  int fixed0_count() const;
  int fixed1_count() const;
};

// Exact bounds by enumeration of all C(n,p) facility subsets (parallel).
// Over budget the trivial fallback is returned with exact = false.
FixingMatrix compute_fixing(const Instance& inst,
                            std::uint64_t budget = kDefaultSubsetBudget);

// Serial reference with identical results.
FixingMatrix compute_fixing_serial(
    const Instance& inst, std::uint64_t budget = kDefaultSubsetBudget);

// Tightens the bounds of the covering counters u_l_h in a built model:
// Fixed0 drops the upper bound to 0, Fixed1 raises the lower bound to 1.
// Throws when the model has no covering counters or the shapes disagree.
void apply_fixing(Model& m, const FixingMatrix& fx);

}  // namespace omt
