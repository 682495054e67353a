#include "omt/heuristics.hpp"

#include <algorithm>
#include <numeric>

#include "omt/mst.hpp"
#include "omt/oracle.hpp"

namespace omt {
namespace {

// Rank-weighted allocation part for an arbitrary nonempty facility set:
// every client pays its cheapest open facility, costs are sorted
// ascending and weighted by rank.
double ordered_part(const Instance& inst, const std::vector<int>& facilities,
                    const std::vector<double>& lambda, double lambda_sum) {
  const int n = inst.n;
  std::vector<double> costs(n);
  for (int i = 0; i < n; ++i) {
    double best = inst.cost[i][facilities[0]];
    for (int j : facilities) best = std::min(best, inst.cost[i][j]);
    costs[i] = best;
  }
  std::sort(costs.begin(), costs.end());
  double v = 0;
  for (int l = 0; l < n; ++l) v += lambda[l] * costs[l];
  return v / lambda_sum;
}

}  // namespace

double search_score(const Instance& inst, const std::vector<int>& facilities,
                    SearchMode mode,
                    const std::vector<double>* lambda_override) {
  if (facilities.empty())
    throw OmtError("facility set", "the search score needs >= 1 facility");
  const std::vector<double>& lam =
      lambda_override ? *lambda_override : inst.lambda;
  if (static_cast<int>(lam.size()) != inst.n)
    throw OmtError("lambda size", "rank weights must have length n");
  double lam_sum = std::accumulate(lam.begin(), lam.end(), 0.0);
  if (lam_sum <= 0)
    throw OmtError("lambda sum", "rank weights must not sum to zero");
  double v = ordered_part(inst, facilities, lam, lam_sum);
  if (mode == SearchMode::OrderedPlusTree && facilities.size() > 1)
    v += kruskal_mst(inst, facilities).cost / (inst.p - 1);
  return v;
}

HeuristicResult local_search(const Instance& inst, SearchMode mode,
                             const std::optional<std::vector<int>>& start,
                             const std::vector<double>* lambda_override) {
  inst.validate();
  const int n = inst.n;
  const int p = inst.p;
  std::vector<int> S;
  if (start) {
    S = *start;
    std::sort(S.begin(), S.end());
    if (static_cast<int>(S.size()) != p ||
        std::adjacent_find(S.begin(), S.end()) != S.end() || S.front() < 0 ||
        S.back() >= n)
      throw OmtError("start set", "need p distinct facilities in range");
  } else {
    // Greedy seed: repeatedly add the facility that lowers the score most
    // (ties to the lowest index).
    while (static_cast<int>(S.size()) < p) {
      int best_j = -1;
      double best_v = 0;
      for (int j = 0; j < n; ++j) {
        if (std::find(S.begin(), S.end(), j) != S.end()) continue;
        S.push_back(j);
        double v = search_score(inst, S, mode, lambda_override);
        S.pop_back();
        if (best_j < 0 || v < best_v - kObjTol) {
          best_j = j;
          best_v = v;
        }
      }
      S.push_back(best_j);
      std::sort(S.begin(), S.end());
    }
  }

  HeuristicResult res;
  double cur = search_score(inst, S, mode, lambda_override);
  res.seed_score = cur;
  // Best-improvement 1-swaps: scan all (out, in) pairs in index order and
  // apply the strictly best one; stop when nothing improves.
  for (;;) {
    int best_out = -1, best_in = -1;
    double best_v = cur;
    for (int oi = 0; oi < p; ++oi) {
      for (int j = 0; j < n; ++j) {
        if (std::find(S.begin(), S.end(), j) != S.end()) continue;
        std::vector<int> T = S;
        T[oi] = j;
        std::sort(T.begin(), T.end());
        double v = search_score(inst, T, mode, lambda_override);
        if (v < best_v - kObjTol) {
          best_v = v;
          best_out = S[oi];
          best_in = j;
        }
      }
    }
    if (best_out < 0) break;
    std::replace(S.begin(), S.end(), best_out, best_in);
    std::sort(S.begin(), S.end());
    cur = best_v;
    res.trace.push_back({best_out, best_in, best_v});
  }

  res.solution = subset_solution(inst, S);
  res.objective = evaluate_objective(inst, res.solution);
  return res;
}

HeuristicResult heuristic_domp_mst(const Instance& inst) {
  return local_search(inst, SearchMode::Ordered);
}

HeuristicResult heuristic_pmedt_domp(const Instance& inst, bool force_median) {
  if (!force_median) return local_search(inst, SearchMode::OrderedPlusTree);
  std::vector<double> ones(inst.n, 1.0);
  return local_search(inst, SearchMode::OrderedPlusTree, std::nullopt, &ones);
}

}  // namespace omt
