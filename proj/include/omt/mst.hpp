#pragma once
// Minimum spanning tree over an induced complete subgraph.

#include <utility>
#include <vector>

#include "omt/instance.hpp"

namespace omt {

struct MstResult {
  std::vector<std::pair<int, int>> edges;  // |nodes|-1 pairs, i < j
  double cost = 0.0;
};

// Kruskal with union-find on the complete subgraph induced by `nodes`.
// Deterministic: candidate edges are taken in (cost, min endpoint,
// max endpoint) order, so ties always resolve the same way.
// Throws OmtError on an empty node set.
MstResult kruskal_mst(const CostMatrix& cost, const std::vector<int>& nodes);

inline MstResult kruskal_mst(const Instance& inst,
                             const std::vector<int>& nodes) {
  return kruskal_mst(inst.cost, nodes);
}

}  // namespace omt
