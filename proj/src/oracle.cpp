#include "omt/oracle.hpp"

#include <algorithm>
#include <limits>

#include "omt/mst.hpp"

#ifdef OMT_HAVE_OPENMP
#include <omp.h>
#endif

namespace omt {

namespace {

// Objective of a fixed facility set without building a full Solution:
// nearest allocation, sorted costs dotted with lambda, Kruskal tree.
double subset_objective(const Instance& inst, const std::vector<int>& fac,
                        std::vector<double>& scratch) {
  const int n = inst.n;
  scratch.resize(n);
  for (int i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (int f : fac) best = std::min(best, inst.cost[i][f]);
    scratch[i] = best;
  }
  std::sort(scratch.begin(), scratch.end());
  double ordered = 0.0;
  for (int l = 0; l < n; ++l) ordered += inst.lambda[l] * scratch[l];
  ordered /= inst.lambda_sum();
  return ordered + kruskal_mst(inst.cost, fac).cost / (inst.p - 1);
}

// Total order used for the reduction: objective first, then the
// lexicographically smaller facility set.  Merging thread-local winners in
// any order yields the same global winner.
bool better(double obj_a, const std::vector<int>& a, double obj_b,
            const std::vector<int>& b) {
  if (obj_a != obj_b) return obj_a < obj_b;
  return a < b;
}

OracleResult finish(const Instance& inst, const std::vector<int>& fac,
                    double obj) {
  OracleResult res;
  res.best = subset_solution(inst, fac);
  res.objective = obj;
  return res;
}

}  // namespace

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  const std::uint64_t cap = std::numeric_limits<std::int64_t>::max();
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
    if (r > cap / num) return cap;  // saturate
    r = r * num / i;
  }
  return r;
}

std::vector<int> unrank_colex(std::uint64_t r, int n, int k) {
  std::vector<int> subset(k);
  for (int pos = k; pos >= 1; --pos) {
    // Largest v with C(v, pos) <= r.
    int v = pos - 1;
    while (v + 1 < n && binomial(v + 1, pos) <= r) ++v;
    subset[pos - 1] = v;
    r -= binomial(v, pos);
  }
  return subset;
}

bool next_colex(std::vector<int>& subset, int n) {
  const int k = static_cast<int>(subset.size());
  for (int i = 0; i < k; ++i) {
    int limit = (i + 1 < k) ? subset[i + 1] : n;
    if (subset[i] + 1 < limit) {
      ++subset[i];
      for (int j = 0; j < i; ++j) subset[j] = j;
      return true;
    }
  }
  return false;
}

std::vector<int> nearest_allocation(const Instance& inst,
                                    const std::vector<int>& facilities) {
  if (facilities.empty())
    throw OmtError("facility set", "nearest allocation needs facilities");
  std::vector<int> fac = facilities;
  std::sort(fac.begin(), fac.end());
  std::vector<int> alloc(inst.n);
  for (int i = 0; i < inst.n; ++i) {
    int best = fac[0];
    for (int f : fac)
      if (inst.cost[i][f] < inst.cost[i][best]) best = f;
    alloc[i] = best;  // ascending scan with strict < keeps the lowest index
  }
  return alloc;
}

Solution subset_solution(const Instance& inst,
                         const std::vector<int>& facilities) {
  Solution sol;
  sol.facilities = facilities;
  std::sort(sol.facilities.begin(), sol.facilities.end());
  sol.alloc = nearest_allocation(inst, sol.facilities);
  sol.tree_edges = kruskal_mst(inst.cost, sol.facilities).edges;
  return sol;
}

OracleResult solve_exact_serial(const Instance& inst, std::uint64_t budget,
                                bool keep_ranked) {
  inst.validate();
  const std::uint64_t total = binomial(inst.n, inst.p);
  if (total > budget)
    throw OmtError("subset budget",
                   "C(n,p) exceeds the enumeration budget; use the "
                   "heuristics for instances of this size");
  std::vector<int> subset(inst.p);
  for (int i = 0; i < inst.p; ++i) subset[i] = i;
  std::vector<double> scratch;
  std::vector<int> best_set;
  double best_obj = std::numeric_limits<double>::infinity();
  std::vector<std::pair<std::vector<int>, double>> ranked;
  for (std::uint64_t r = 0; r < total; ++r) {
    double obj = subset_objective(inst, subset, scratch);
    if (keep_ranked) ranked.emplace_back(subset, obj);
    if (best_set.empty() || better(obj, subset, best_obj, best_set)) {
      best_obj = obj;
      best_set = subset;
    }
    next_colex(subset, inst.n);
  }
  OracleResult res = finish(inst, best_set, best_obj);
  if (keep_ranked) res.ranked = std::move(ranked);
  return res;
}

OracleResult solve_exact(const Instance& inst, std::uint64_t budget,
                         bool keep_ranked) {
  if (keep_ranked) return solve_exact_serial(inst, budget, keep_ranked);
#ifndef OMT_HAVE_OPENMP
  return solve_exact_serial(inst, budget, keep_ranked);
#else
  inst.validate();
  const std::uint64_t total = binomial(inst.n, inst.p);
  if (total > budget)
    throw OmtError("subset budget",
                   "C(n,p) exceeds the enumeration budget; use the "
                   "heuristics for instances of this size");
  std::vector<int> global_set;
  double global_obj = std::numeric_limits<double>::infinity();
#pragma omp parallel
  {
    std::vector<double> scratch;
    std::vector<int> local_set;
    double local_obj = std::numeric_limits<double>::infinity();
    const int workers = omp_get_num_threads();
    const int me = omp_get_thread_num();
    // Contiguous colex rank block per worker.
    const std::uint64_t lo = total * me / workers;
    const std::uint64_t hi = total * (me + 1) / workers;
    if (lo < hi) {
      std::vector<int> subset = unrank_colex(lo, inst.n, inst.p);
      for (std::uint64_t r = lo; r < hi; ++r) {
        double obj = subset_objective(inst, subset, scratch);
        if (local_set.empty() || better(obj, subset, local_obj, local_set)) {
          local_obj = obj;
          local_set = subset;
        }
        next_colex(subset, inst.n);
      }
    }
#pragma omp critical
    {
      if (!local_set.empty() &&
          (global_set.empty() ||
           better(local_obj, local_set, global_obj, global_set))) {
        global_obj = local_obj;
        global_set = local_set;
      }
    }
  }
  return finish(inst, global_set, global_obj);
#endif
}

}  // namespace omt
