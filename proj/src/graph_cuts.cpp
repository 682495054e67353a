#include "omt/graph_cuts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace omt {

namespace {

constexpr double kCutTol = 1e-6;

bool near_binary(double v) {
  return std::abs(v) <= kCutTol || std::abs(v - 1.0) <= kCutTol;
}

// Cut value of S: allocation arcs leaving or entering S plus tree edges
// across S.
double cut_value(const std::vector<int>& in_s,
                 const std::vector<std::vector<double>>& x,
                 const std::vector<std::vector<double>>& z) {
  const int n = static_cast<int>(x.size());
  double v = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j || in_s[i] == in_s[j]) continue;
      v += x[i][j];          // arc crossing in one direction
      if (i < j) v += z[i][j];  // undirected tree edge, counted once
    }
  return v;
}

// Stoer-Wagner global minimum cut on a dense nonnegative weight matrix.
// Returns (weight, one side of the cut).
std::pair<double, std::vector<int>> global_min_cut(
    std::vector<std::vector<double>> w) {
  const int n = static_cast<int>(w.size());
  std::vector<std::vector<int>> groups(n);
  for (int i = 0; i < n; ++i) groups[i] = {i};
  std::vector<int> active(n);
  for (int i = 0; i < n; ++i) active[i] = i;

  double best = std::numeric_limits<double>::infinity();
  std::vector<int> best_side;

  while (active.size() > 1) {
    // Maximum-adjacency order of the active super-nodes.
    std::vector<char> added(n, 0);
    std::vector<double> wsum(n, 0.0);
    std::vector<int> order;
    for (size_t k = 0; k < active.size(); ++k) {
      int sel = -1;
      for (int v : active)
        if (!added[v] && (sel == -1 || wsum[v] > wsum[sel])) sel = v;
      added[sel] = 1;
      order.push_back(sel);
      for (int v : active)
        if (!added[v]) wsum[v] += w[sel][v];
    }
    int t = order.back();
    int s = order[order.size() - 2];
    double cut_of_phase = wsum[t];
    if (cut_of_phase < best) {
      best = cut_of_phase;
      best_side = groups[t];
    }
    // Merge t into s.
    for (int v : active) {
      if (v == s || v == t) continue;
      w[s][v] += w[t][v];
      w[v][s] = w[s][v];
    }
    groups[s].insert(groups[s].end(), groups[t].begin(), groups[t].end());
    active.erase(std::find(active.begin(), active.end(), t));
  }
  std::sort(best_side.begin(), best_side.end());
  return {best, best_side};
}

}  // namespace

std::vector<ConnectionCut> separate_connection_cut(
    const Instance& inst, const std::vector<std::vector<double>>& x,
    const std::vector<std::vector<double>>& z) {
  const int n = inst.n;
  bool integral = true;
  for (int i = 0; i < n && integral; ++i)
    for (int j = 0; j < n; ++j)
      if (!near_binary(x[i][j]) || !near_binary(z[i][j])) {
        integral = false;
        break;
      }

  std::vector<ConnectionCut> cuts;
  if (integral) {
    // Components of the undirected support graph (arcs in either
    // direction or tree edges with value > 1/2; self-loops ignored).
    std::vector<int> comp(n, -1);
    int ncomp = 0;
    for (int s = 0; s < n; ++s) {
      if (comp[s] >= 0) continue;
      std::vector<int> stack = {s};
      comp[s] = ncomp;
      while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int u = 0; u < n; ++u) {
          if (u == v || comp[u] >= 0) continue;
          if (x[v][u] > 0.5 || x[u][v] > 0.5 || z[v][u] > 0.5) {
            comp[u] = ncomp;
            stack.push_back(u);
          }
        }
      }
      ++ncomp;
    }
    if (ncomp == 1) return cuts;
    // With exactly two components the complementary cuts coincide; keep
    // only the side containing node 0.
    int limit = (ncomp == 2) ? 1 : ncomp;
    for (int c = 0; c < limit; ++c) {
      ConnectionCut cut;
      std::vector<int> in_s(n, 0);
      for (int v = 0; v < n; ++v)
        if (comp[v] == c) {
          in_s[v] = 1;
          cut.subset.push_back(v);
        }
      cut.lhs = cut_value(in_s, x, z);
      if (cut.lhs < 1.0 - kCutTol) cuts.push_back(std::move(cut));
    }
    return cuts;
  }

  // Fractional point: one global minimum cut on the weighted support.
  std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      double wij = x[i][j] + x[j][i] + z[std::min(i, j)][std::max(i, j)];
      w[i][j] = wij;
    }
  auto [weight, side] = global_min_cut(w);
  if (weight < 1.0 - kCutTol && !side.empty() &&
      static_cast<int>(side.size()) < n) {
    ConnectionCut cut;
    cut.subset = side;
    std::vector<int> in_s(n, 0);
    for (int v : side) in_s[v] = 1;
    cut.lhs = cut_value(in_s, x, z);
    cuts.push_back(std::move(cut));
  }
  return cuts;
}

}  // namespace omt
