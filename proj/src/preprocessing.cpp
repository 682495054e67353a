#include "omt/preprocessing.hpp"

#include <algorithm>

#ifdef OMT_HAVE_OPENMP
#include <omp.h>
#endif

namespace omt {
namespace {

// Candidate H1/H0 contributions of one facility subset, pushed into the
// running elementwise maxima.  For each client outside S the cheapest
// (resp. most expensive) connection is bucketed by ladder rung, then
// prefix/suffix sums turn the histogram into counts per rung:
//   #{ min <= c_(h-1) }  =  #{ rung(min) <= h-1 }
//   #{ max >= c_(h)   }  =  #{ rung(max) >= h   }
void fold_subset(const Instance& inst, const CostLadder& ladder,
                 const std::vector<int>& subset, std::vector<int>& lo_hist,
                 std::vector<int>& hi_hist, std::vector<int>& H1,
                 std::vector<int>& H0) {
  const int n = inst.n;
  const int p = inst.p;
  const int H = ladder.H_size;
  std::fill(lo_hist.begin(), lo_hist.end(), 0);
  std::fill(hi_hist.begin(), hi_hist.end(), 0);
  std::vector<char> in(n, 0);
  for (int j : subset) in[j] = 1;
  for (int i = 0; i < n; ++i) {
    if (in[i]) continue;
    double lo = inst.cost[i][subset[0]], hi = lo;
    for (int j : subset) {
      lo = std::min(lo, inst.cost[i][j]);
      hi = std::max(hi, inst.cost[i][j]);
    }
    ++lo_hist[ladder.rung_of(lo)];
    ++hi_hist[ladder.rung_of(hi)];
  }
  int below = 0;  // clients with rung(min) <= h-1, accumulated over h
  int at_or_above = n - p - hi_hist[0];  // clients with rung(max) >= h
  for (int h = 1; h <= H; ++h) {
    below += lo_hist[h - 1];
    H1[h - 1] = std::max(H1[h - 1], p + below);
    H0[h - 1] = std::max(H0[h - 1], p + at_or_above);
    at_or_above -= hi_hist[h];
  }
}

FixingMatrix assemble(const Instance& inst, const CostLadder& ladder,
                      std::vector<int> H1, std::vector<int> H0, bool exact) {
  const int n = inst.n;
  const int p = inst.p;
  const int H = ladder.H_size;
  FixingMatrix fx;
  fx.n = n;
  fx.H = H;
  fx.H1 = std::move(H1);
  fx.H0 = std::move(H0);
  fx.exact = exact;
  fx.state.assign(n, std::vector<FixState>(H, FixState::NotFixed));
  for (int h = 1; h <= H; ++h) {
    // A position fixed to 1 and to 0 at once would need
    // H1_h + H0_h < n + p, which contradicts both being maxima over the
    // same nonempty subset family; guard anyway.
    if (fx.H1[h - 1] + fx.H0[h - 1] < n + p)
      throw OmtError("fixing conflict",
                     "rung " + std::to_string(h) + " fixes a position both "
                     "ways; the bounds are inconsistent");
    for (int l = 1; l <= n; ++l) {
      if (l > fx.H1[h - 1])
        fx.state[l - 1][h - 1] = FixState::Fixed1;
      else if (l <= n - fx.H0[h - 1] + p)
        fx.state[l - 1][h - 1] = FixState::Fixed0;
    }
  }
  return fx;
}

FixingMatrix trivial_fallback(const Instance& inst, const CostLadder& ladder) {
  std::vector<int> H1(ladder.H_size, inst.n), H0(ladder.H_size, inst.n);
  return assemble(inst, ladder, std::move(H1), std::move(H0), false);
}

}  // namespace

int FixingMatrix::fixed0_count() const {
  int k = 0;
  for (const auto& row : state)
    for (FixState s : row) k += s == FixState::Fixed0;
  return k;
}

int FixingMatrix::fixed1_count() const {
  int k = 0;
  for (const auto& row : state)
    for (FixState s : row) k += s == FixState::Fixed1;
  return k;
}

FixingMatrix compute_fixing_serial(const Instance& inst,
                                   std::uint64_t budget) {
  inst.validate();
  CostLadder ladder = build_cost_ladder(inst.cost);
  if (binomial(inst.n, inst.p) > budget)
    return trivial_fallback(inst, ladder);
  const int H = ladder.H_size;
  std::vector<int> H1(H, 0), H0(H, 0);
  std::vector<int> lo_hist(H + 1), hi_hist(H + 1);
  std::vector<int> subset(inst.p);
  for (int i = 0; i < inst.p; ++i) subset[i] = i;
  do {
    fold_subset(inst, ladder, subset, lo_hist, hi_hist, H1, H0);
  } while (next_colex(subset, inst.n));
  return assemble(inst, ladder, std::move(H1), std::move(H0), true);
}

FixingMatrix compute_fixing(const Instance& inst, std::uint64_t budget) {
#ifndef OMT_HAVE_OPENMP
  return compute_fixing_serial(inst, budget);
#else
  inst.validate();
  CostLadder ladder = build_cost_ladder(inst.cost);
  const std::uint64_t total = binomial(inst.n, inst.p);
  if (total > budget) return trivial_fallback(inst, ladder);
  const int H = ladder.H_size;
  std::vector<int> H1(H, 0), H0(H, 0);
  const int workers = std::max(1, omp_get_max_threads());
  const std::uint64_t chunk = (total + workers - 1) / workers;
#pragma omp parallel for
  for (int w = 0; w < workers; ++w) {
    std::uint64_t lo = std::min<std::uint64_t>(total, w * chunk);
    std::uint64_t hi = std::min<std::uint64_t>(total, lo + chunk);
    if (lo >= hi) continue;
    std::vector<int> h1(H, 0), h0(H, 0);
    std::vector<int> lo_hist(H + 1), hi_hist(H + 1);
    std::vector<int> subset = unrank_colex(lo, inst.n, inst.p);
    for (std::uint64_t r = lo; r < hi; ++r) {
      fold_subset(inst, ladder, subset, lo_hist, hi_hist, h1, h0);
      if (r + 1 < hi) next_colex(subset, inst.n);
    }
#pragma omp critical
    {
      for (int h = 0; h < H; ++h) {
        H1[h] = std::max(H1[h], h1[h]);
        H0[h] = std::max(H0[h], h0[h]);
      }
    }
  }
  return assemble(inst, ladder, std::move(H1), std::move(H0), true);
#endif
}

void apply_fixing(Model& m, const FixingMatrix& fx) {
  if (!m.has_var("u_1_1"))
    throw OmtError("fixing target",
                   "the model carries no covering counters");
  for (int l = 1; l <= fx.n; ++l)
    for (int h = 1; h <= fx.H; ++h) {
      FixState s = fx.state[l - 1][h - 1];
      if (s == FixState::NotFixed) continue;
      ModelVar& v = m.vars[m.var("u_" + std::to_string(l) + "_" +
                                 std::to_string(h))];
      if (s == FixState::Fixed0)
        v.ub = 0;
      else
        v.lb = 1;
    }
}

}  // namespace omt
