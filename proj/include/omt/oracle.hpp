#pragma once
// Exact solver by enumeration of facility subsets; ground truth for every
// other component.
//
// For nonnegative rank weights, allocating each client to its cheapest open
// facility makes the sorted allocation-cost vector componentwise minimal,
// so it is optimal for any fixed facility set; the tree part is independent
// of allocations and solved by Kruskal.  Enumerating all p-subsets of V
// therefore yields the exact optimum.

#include <cstdint>
#include <optional>
#include <vector>

#include "omt/instance.hpp"

namespace omt {

struct OracleResult {
  Solution best;
  double objective = 0.0;
  // All (facility set, objective) pairs in enumeration order, when requested.
  std::optional<std::vector<std::pair<std::vector<int>, double>>> ranked;
};

// Cheapest open facility per client, ties to the lowest facility index;
// facilities serve themselves.  Throws OmtError on an empty facility set.
std::vector<int> nearest_allocation(const Instance& inst,
                                    const std::vector<int>& facilities);

// Nearest allocation plus minimum spanning tree for a fixed facility set.
Solution subset_solution(const Instance& inst,
                         const std::vector<int>& facilities);

inline constexpr std::uint64_t kDefaultSubsetBudget = 2'000'000;

// Enumerates all C(n,p) facility subsets in colex order and returns the
// minimum-objective solution; ties go to the lexicographically smallest
// facility set, so results are deterministic and independent of the worker
// count.  Throws OmtError when C(n,p) exceeds the budget (use the
// heuristics instead at that scale).  The enumeration is partitioned over
// OpenMP workers; keep_ranked forces the serial path and records every
// subset's objective.
OracleResult solve_exact(const Instance& inst,
                         std::uint64_t budget = kDefaultSubsetBudget,
                         bool keep_ranked = false);

// Single-threaded reference implementation with identical results; kept as
// the baseline the parallel kernel is tested and benchmarked against.
OracleResult solve_exact_serial(const Instance& inst,
                                std::uint64_t budget = kDefaultSubsetBudget,
                                bool keep_ranked = false);

// C(n,k) saturating at 2^63-1, used for budget checks and rank partitioning.
std::uint64_t binomial(int n, int k);

// Colex rank r (0-based) -> sorted k-subset of {0..n-1}.
std::vector<int> unrank_colex(std::uint64_t r, int n, int k);

// Advances a sorted k-subset to its colex successor; returns false past the
// last subset.
bool next_colex(std::vector<int>& subset, int n);

}  // namespace omt
