#pragma once
// Initial-solution heuristics: greedy seeding plus best-improvement
// 1-swap local search over facility sets.
//
// Two search modes share the machinery.  "Ordered" scores a facility set
// by the rank-weighted allocation part only — the classic ordered-median
// score — and attaches the spanning tree afterwards.  "OrderedPlusTree"
// scores sets by allocation part plus tree part, so swaps already see the
// tree cost they cause.  Both scans are deterministic: candidates are
// visited in ascending index order and the first strictly best move wins,
// so results are reproducible across runs and worker counts.

#include <optional>
#include <vector>

#include "omt/instance.hpp"

namespace omt {

enum class SearchMode { Ordered, OrderedPlusTree };

struct HeuristicMove {
  int out = -1;  // facility removed (0-based)
  int in = -1;   // facility added
  double score_after = 0.0;  // search score after applying the move
};

struct HeuristicResult {
  Solution solution;
  double objective = 0.0;  // full objective of the final solution
  double seed_score = 0.0;  // search score of the seed set, before any move
  std::vector<HeuristicMove> trace;  // accepted moves, in order
};

// Score used during the search: rank-weighted nearest-allocation part,
// plus the spanning-tree part when the mode includes it.  The optional
// lambda override replaces the instance's rank weights (same length n).
double search_score(const Instance& inst, const std::vector<int>& facilities,
                    SearchMode mode,
                    const std::vector<double>* lambda_override = nullptr);

// Greedy seed then best-improvement 1-swaps until no swap improves the
// score by more than the objective tolerance.  The final solution is the
// nearest allocation plus minimum spanning tree of the resulting set, and
// `objective` is its full objective under the instance's rank weights.
HeuristicResult local_search(const Instance& inst, SearchMode mode,
                             const std::optional<std::vector<int>>& start =
                                 std::nullopt,
                             const std::vector<double>* lambda_override =
                                 nullptr);

// Ordered-median search first, spanning tree attached afterwards.
HeuristicResult heuristic_domp_mst(const Instance& inst);

// Tree-inclusive search; with force_median the search scores allocations
// with all-ones rank weights (a median surrogate) while the reported
// objective still uses the instance's weights.
HeuristicResult heuristic_pmedt_domp(const Instance& inst,
                                     bool force_median = false);

}  // namespace omt
