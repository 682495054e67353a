#include "omt/mst.hpp"

#include <algorithm>
#include <numeric>

namespace omt {

MstResult kruskal_mst(const CostMatrix& cost, const std::vector<int>& nodes) {
  if (nodes.empty()) throw OmtError("mst nodes", "node set must be nonempty");
  const int m = static_cast<int>(nodes.size());
  struct Edge {
    double c;
    int i, j;  // i < j
  };
  std::vector<Edge> edges;
  edges.reserve(static_cast<size_t>(m) * (m - 1) / 2);
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) {
      int i = std::min(nodes[a], nodes[b]);
      int j = std::max(nodes[a], nodes[b]);
      edges.push_back({cost[i][j], i, j});
    }
  // Deterministic tie-break: cost, then smaller endpoint, then larger.
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    if (a.c != b.c) return a.c < b.c;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });

  const int n = static_cast<int>(cost.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };

  MstResult mst;
  for (const Edge& e : edges) {
    int ri = find(e.i), rj = find(e.j);
    if (ri == rj) continue;
    parent[ri] = rj;
    mst.edges.emplace_back(e.i, e.j);
    mst.cost += e.c;
    if (static_cast<int>(mst.edges.size()) == m - 1) break;
  }
  std::sort(mst.edges.begin(), mst.edges.end());
  return mst;
}

}  // namespace omt
