#pragma once
// Connection-cut separation on allocation/tree supports.
//
// For any node subset S that is strictly contained in V, a feasible point
// must send at least one unit across the cut: allocation arcs in either
// direction or tree edges,
//
//     sum_{(i,j) in delta+(S)} x_ij + sum_{(i,j) in delta-(S)} x_ij
//       + sum_{(i,j) in delta(S)} z_ij  >=  1.
//
// Integer points are separated by connected components of the support
// graph; fractional points by a global minimum cut (Stoer-Wagner) on the
// weighted support.

#include <vector>

#include "omt/instance.hpp"

namespace omt {

struct ConnectionCut {
  std::vector<int> subset;  // S, sorted node ids
  double lhs = 0.0;         // cut value at the separated point (< 1)
};

// x: n x n allocation values (diagonal = open indicators, ignored for
// support edges); z: symmetric n x n tree-edge values.  Integer points
// (all values within 1e-6 of {0,1}) yield one cut per disconnected
// component S != V whose cut value is below 1 - 1e-6; when the support has
// exactly two components the two complementary cuts coincide and only the
// one containing the smallest node is kept.  Fractional points yield the
// global minimum cut if its weight is below 1 - 1e-6.
std::vector<ConnectionCut> separate_connection_cut(
    const Instance& inst, const std::vector<std::vector<double>>& x,
    const std::vector<std::vector<double>>& z);

}  // namespace omt
