#include "omt/formulations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>

namespace omt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string nm(const char* base, int a) {
  return std::string(base) + "_" + std::to_string(a + 1);
}
std::string nm(const char* base, int a, int b) {
  return nm(base, a) + "_" + std::to_string(b + 1);
}
std::string nm(const char* base, int a, int b, int c) {
  return nm(base, a, b) + "_" + std::to_string(c + 1);
}

// Rooted view of an edge list: parents, depths and subtree sizes, used to
// assign arc orientations, level values and flow quantities when embedding
// a combinatorial solution into a realization.
struct RootedTree {
  std::vector<int> parent;  // -1 for the root and for off-tree nodes
  std::vector<int> depth;   // -1 off tree
  std::vector<int> subtree; // node count of the rooted subtree, 0 off tree
  std::vector<int> order;   // breadth-first, root first
};

RootedTree root_tree(int n, const std::vector<std::pair<int, int>>& edges,
                     int root) {
  std::vector<std::vector<int>> adj(n);
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  RootedTree t;
  t.parent.assign(n, -1);
  t.depth.assign(n, -1);
  t.subtree.assign(n, 0);
  std::queue<int> q;
  q.push(root);
  t.depth[root] = 0;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    t.order.push_back(v);
    for (int w : adj[v]) {
      if (t.depth[w] >= 0) continue;
      t.depth[w] = t.depth[v] + 1;
      t.parent[w] = v;
      q.push(w);
    }
  }
  for (auto it = t.order.rbegin(); it != t.order.rend(); ++it) {
    t.subtree[*it] += 1;
    if (t.parent[*it] >= 0) t.subtree[t.parent[*it]] += t.subtree[*it];
  }
  return t;
}

}  // namespace

const char* family_name(Family f) { return f == Family::F1 ? "f1" : "f2"; }
const char* sorting_name(SortingScheme s) {
  return s == SortingScheme::XL ? "xl" : "u";
}
const char* tree_name(TreeScheme t) {
  switch (t) {
    case TreeScheme::SUB: return "sub";
    case TreeScheme::MTZ: return "mtz";
    case TreeScheme::FLOW1: return "flow1";
    case TreeScheme::FLOW2: return "flow2";
    case TreeScheme::KM: return "km";
  }
  return "sub";
}

Family parse_family(const std::string& s) {
  if (s == "f1" || s == "F1") return Family::F1;
  if (s == "f2" || s == "F2") return Family::F2;
  throw OmtError("family name", s);
}
SortingScheme parse_sorting(const std::string& s) {
  if (s == "xl" || s == "XL") return SortingScheme::XL;
  if (s == "u" || s == "U") return SortingScheme::U;
  throw OmtError("sorting name", s);
}
TreeScheme parse_tree(const std::string& s) {
  if (s == "sub") return TreeScheme::SUB;
  if (s == "mtz") return TreeScheme::MTZ;
  if (s == "flow1") return TreeScheme::FLOW1;
  if (s == "flow2") return TreeScheme::FLOW2;
  if (s == "km") return TreeScheme::KM;
  throw OmtError("tree name", s);
}

std::string scheme_name(const BuildOptions& opts) {
  std::string s = family_name(opts.family);
  s += "_";
  s += sorting_name(opts.sorting);
  s += "_";
  s += opts.with_mu ? "master" : tree_name(opts.tree);
  return s;
}

SizePrediction predicted_size(Family family, SortingScheme sorting, int n,
                              int H) {
  if (n < 2) throw OmtError("node count", "size prediction needs n >= 2");
  if (sorting == SortingScheme::U && H < 1)
    throw OmtError("ladder size", "covering prediction needs H >= 1");
  long long N = n, HH = H;
  SizePrediction sp;
  // Variables: allocation n^2, tree edges n(n-1)/2, plus the sorting block
  // (n^3 position copies or n*H covering counters).
  long long common_vars = N * N + N * (N - 1) / 2;
  sp.variables =
      common_vars + (sorting == SortingScheme::XL ? N * N * N : N * HH);
  if (family == Family::F1) {
    // 1 + n + n(n-1) + n(n-1)/2 + n(n-1)/2 core allocation/tree rows, then
    // n^2 + n + (n-1) ordering rows or H + (n-1)H covering rows.
    sp.constraints = sorting == SortingScheme::XL
                         ? 3 * N * N + N
                         : 2 * N * N + HH * N - N + 1;
  } else {
    // F2 adds one more row family on the edges (allocation edges forced
    // into the tree), giving (7n^2+n)/2 and (5n^2-3n)/2 + 1 + nH.
    sp.constraints = sorting == SortingScheme::XL
                         ? (7 * N * N + N) / 2
                         : (5 * N * N - 3 * N) / 2 + 1 + N * HH;
  }
  return sp;
}

Model build_model(const Instance& inst, const BuildOptions& opts) {
  inst.validate();
  if (opts.with_mu && opts.family == Family::F2)
    throw OmtError("master family",
                   "the decomposition master is defined on the facility-tree "
                   "family only");
  if (opts.staircase && opts.sorting != SortingScheme::XL)
    throw OmtError("staircase scheme",
                   "staircase rows replace position-ordering rows and exist "
                   "only for the xl sorting scheme");

  const int n = inst.n;
  const int p = inst.p;
  const auto& c = inst.cost;
  const double lam_sum = inst.lambda_sum();
  const double tree_scale = 1.0 / (p - 1);

  CostLadder ladder;
  const bool need_ladder = opts.sorting == SortingScheme::U || opts.staircase;
  if (need_ladder) ladder = build_cost_ladder(c);
  const int H = ladder.H_size;

  Model m;
  m.name = scheme_name(opts);
  {
    std::ostringstream head;
    head << "model: " << m.name << "  n=" << n << " p=" << p;
    m.notes.push_back(head.str());
  }
  if (opts.family == Family::F2)
    m.notes.push_back(
        "single spanning tree over all nodes containing every allocation "
        "edge; the objective subtracts allocation edges from the tree cost");
  if (opts.sorting == SortingScheme::XL && opts.family == Family::F1)
    m.notes.push_back(
        "allocation variables may be relaxed to [0,1]; the position copies "
        "carry the integrality");
  if (opts.staircase)
    m.notes.push_back(
        "option: staircase ordering rows in place of aggregated ordering");
  if (opts.sorting == SortingScheme::U && !opts.redundant_chain)
    m.notes.push_back("option: redundant chain rows omitted");
  if (opts.family == Family::F2 && opts.split_assign_open)
    m.notes.push_back("option: split open-facility allocation rows");
  if (opts.with_mu)
    m.notes.push_back(
        "master relaxation: tree variables dropped; surrogate mu >= 0 in "
        "the objective is bounded from below by decomposition cuts");
  if (!opts.with_mu && opts.tree == TreeScheme::SUB) {
    m.notes.push_back(
        "lazy tree realization: subtour rows  sum_{i<j in S} z_i_j <= "
        "|S|-1  for every nonempty proper subset S of the nodes");
    m.notes.push_back(
        "equivalently connection rows  sum_{allocations crossing S} x + "
        "sum_{edges crossing S} z >= 1, separated by minimum cut");
  }

  // ---------------- variables ----------------
  std::vector<std::vector<int>> xid(n, std::vector<int>(n, -1));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double obj = 0.0;
      if (opts.family == Family::F2 && i != j) obj = -c[i][j] * tree_scale;
      xid[i][j] = m.add_var(nm("x", i, j), obj, 0, 1, VarKind::Binary,
                            VarTag::X);
    }
  std::vector<std::vector<int>> zid(n, std::vector<int>(n, -1));
  if (!opts.with_mu) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        zid[i][j] = m.add_var(nm("z", i, j), c[i][j] * tree_scale, 0, 1,
                              VarKind::Binary, VarTag::Z);
  }
  std::vector<std::vector<std::vector<int>>> xsid;
  std::vector<std::vector<int>> uid;
  if (opts.sorting == SortingScheme::XL) {
    xsid.assign(n, std::vector<std::vector<int>>(n, std::vector<int>(n, -1)));
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          xsid[l][i][j] =
              m.add_var(nm("xs", l, i, j), inst.lambda[l] * c[i][j] / lam_sum,
                        0, 1, VarKind::Binary, VarTag::XL);
  } else {
    uid.assign(n, std::vector<int>(H, -1));
    for (int l = 0; l < n; ++l)
      for (int h = 1; h <= H; ++h) {
        double step =
            ladder.values[h - 1] - (h > 1 ? ladder.values[h - 2] : 0.0);
        uid[l][h - 1] = m.add_var(nm("u", l) + "_" + std::to_string(h),
                                  inst.lambda[l] * step / lam_sum, 0, 1,
                                  VarKind::Binary, VarTag::U);
      }
  }

  const bool f1 = opts.family == Family::F1;
  std::vector<int> rid(n, -1), lid(n, -1);
  std::vector<std::vector<int>> yid(n, std::vector<int>(n, -1));
  std::vector<std::vector<int>> fid(n, std::vector<int>(n, -1));
  std::vector<std::vector<std::vector<int>>> qid;
  if (!opts.with_mu) {
    switch (opts.tree) {
      case TreeScheme::SUB:
        break;
      case TreeScheme::MTZ:
        if (f1)
          for (int i = 0; i < n; ++i)
            rid[i] = m.add_var(nm("r", i), 0, 0, 1, VarKind::Binary,
                               VarTag::R);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            if (i != j)
              yid[i][j] = m.add_var(nm("y", i, j), 0, 0, 1, VarKind::Binary,
                                    VarTag::Y);
        for (int i = 0; i < n; ++i) {
          // Facility-tree levels live in [0,p] (clients sit at 0); the
          // all-nodes tree pins the root at level 1 and the rest in [2,n].
          double lo = f1 ? 0 : (i == 0 ? 1 : 2);
          double hi = f1 ? p : (i == 0 ? 1 : n);
          lid[i] = m.add_var(nm("l", i), 0, lo, hi, VarKind::Continuous,
                             VarTag::L);
        }
        break;
      case TreeScheme::FLOW1:
        for (int i = 0; i < n; ++i)
          rid[i] =
              m.add_var(nm("r", i), 0, 0, 1, VarKind::Binary, VarTag::R);
        [[fallthrough]];
      case TreeScheme::FLOW2:
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            if (i != j)
              fid[i][j] = m.add_var(nm("f", i, j), 0, 0, kInf,
                                    VarKind::Continuous, VarTag::F);
        break;
      case TreeScheme::KM:
        qid.assign(n,
                   std::vector<std::vector<int>>(n, std::vector<int>(n, -1)));
        for (int k = 0; k < n; ++k)
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              if (i != j)
                qid[k][i][j] = m.add_var(nm("q", k, i, j), 0, 0, 1,
                                         VarKind::Continuous, VarTag::Q);
        break;
    }
  }
  int muid = -1;
  if (opts.with_mu)
    muid = m.add_var("mu", 1.0, 0, kInf, VarKind::Continuous, VarTag::MU);
  (void)muid;

  // ---------------- allocation rows ----------------
  {
    std::vector<std::pair<int, double>> t;
    for (int i = 0; i < n; ++i) t.emplace_back(xid[i][i], 1.0);
    m.add_row("num_facilities", std::move(t), LpSense::EQ, p, RowTag::Core);
  }
  for (int i = 0; i < n; ++i) {
    std::vector<std::pair<int, double>> t;
    for (int j = 0; j < n; ++j) t.emplace_back(xid[i][j], 1.0);
    m.add_row(nm("assign_once", i), std::move(t), LpSense::EQ, 1,
              RowTag::Core);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (f1) {
        // Clients may only be sent to open facilities.
        m.add_row(nm("alloc_open", i, j),
                  {{xid[i][j], 1.0}, {xid[j][j], -1.0}}, LpSense::LE, 0,
                  RowTag::Core);
      } else if (!opts.split_assign_open) {
        // Merged: an open node never allocates away, and the target must
        // be open: 2 x_ij <= 1 - x_ii + x_jj.
        m.add_row(nm("assign_or_open", i, j),
                  {{xid[i][j], 2.0}, {xid[i][i], 1.0}, {xid[j][j], -1.0}},
                  LpSense::LE, 1, RowTag::Core);
      } else {
        m.add_row(nm("assign_noopen", i, j),
                  {{xid[i][j], 1.0}, {xid[i][i], 1.0}}, LpSense::LE, 1,
                  RowTag::Core);
        m.add_row(nm("alloc_open", i, j),
                  {{xid[i][j], 1.0}, {xid[j][j], -1.0}}, LpSense::LE, 0,
                  RowTag::Core);
      }
    }

  // ---------------- tree coupling and placeholder rows ----------------
  if (!opts.with_mu) {
    if (f1) {
      // Tree edges only between open facilities.
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          m.add_row(nm("edge_ends", i, j),
                    {{zid[i][j], 2.0}, {xid[i][i], -1.0}, {xid[j][j], -1.0}},
                    LpSense::LE, 0, RowTag::Core);
    } else {
      // Every allocation edge is a tree edge...
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          m.add_row(nm("alloc_in_tree", i, j),
                    {{xid[i][j], 1.0}, {xid[j][i], 1.0}, {zid[i][j], -1.0}},
                    LpSense::LE, 0, RowTag::Core);
      // ...and a tree edge needs open endpoints or a supporting allocation.
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          m.add_row(nm("edge_support", i, j),
                    {{zid[i][j], 2.0},
                     {xid[i][i], -1.0},
                     {xid[j][j], -1.0},
                     {xid[i][j], -1.0},
                     {xid[j][i], -1.0}},
                    LpSense::LE, 0, RowTag::Core);
    }
    // Placeholder for "z is a spanning tree": the cardinality row plus
    // domination rows on every edge but the lexicographically last one.
    {
      std::vector<std::pair<int, double>> t;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) t.emplace_back(zid[i][j], 1.0);
      m.add_row("tree_card", std::move(t), LpSense::EQ, f1 ? p - 1 : n - 1,
                RowTag::TreePlaceholder);
    }
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        if (i == n - 2 && j == n - 1) continue;
        m.add_row(nm("tree_dom", i, j), {{zid[i][j], 1.0}}, LpSense::LE, 1,
                  RowTag::TreePlaceholder);
      }
  }

  // ---------------- sorting rows ----------------
  if (opts.sorting == SortingScheme::XL) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        std::vector<std::pair<int, double>> t;
        for (int l = 0; l < n; ++l) t.emplace_back(xsid[l][i][j], 1.0);
        t.emplace_back(xid[i][j], -1.0);
        m.add_row(nm("sort_link", i, j), std::move(t), LpSense::EQ, 0,
                  RowTag::Core);
      }
    for (int l = 0; l < n; ++l) {
      std::vector<std::pair<int, double>> t;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) t.emplace_back(xsid[l][i][j], 1.0);
      m.add_row(nm("sort_fill", l), std::move(t), LpSense::EQ, 1,
                RowTag::Core);
    }
    if (!opts.staircase) {
      // Costs picked at consecutive positions must be nondecreasing.
      for (int l = 0; l + 1 < n; ++l) {
        std::vector<std::pair<int, double>> t;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            if (c[i][j] == 0.0) continue;
            t.emplace_back(xsid[l][i][j], c[i][j]);
            t.emplace_back(xsid[l + 1][i][j], -c[i][j]);
          }
        m.add_row(nm("sort_order", l), std::move(t), LpSense::LE, 0,
                  RowTag::Core);
      }
    } else {
      // If position l already pays at least the h-th ladder value, position
      // l+1 cannot pay less: one row per (position, ladder value).
      for (int l = 0; l + 1 < n; ++l)
        for (int h = 1; h <= H; ++h) {
          std::vector<std::pair<int, double>> t;
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
              if (ladder.rung_of(c[i][j]) >= h)
                t.emplace_back(xsid[l][i][j], 1.0);
              else
                t.emplace_back(xsid[l + 1][i][j], 1.0);
            }
          m.add_row(nm("stair", l) + "_" + std::to_string(h), std::move(t),
                    LpSense::LE, 1, RowTag::Staircase);
        }
    }
  } else {
    // Counting rows: how many positions pay at least the h-th ladder value
    // equals how many chosen allocations cost at least that much.
    for (int h = 1; h <= H; ++h) {
      std::vector<std::pair<int, double>> t;
      for (int l = 0; l < n; ++l) t.emplace_back(uid[l][h - 1], 1.0);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (ladder.rung_of(c[i][j]) >= h) t.emplace_back(xid[i][j], -1.0);
      m.add_row("cover_count_" + std::to_string(h), std::move(t), LpSense::EQ,
                0, RowTag::Core);
    }
    // Position monotonicity: later positions pay at least as much.
    for (int l = 0; l + 1 < n; ++l)
      for (int h = 1; h <= H; ++h)
        m.add_row(nm("cover_mono", l) + "_" + std::to_string(h),
                  {{uid[l][h - 1], 1.0}, {uid[l + 1][h - 1], -1.0}},
                  LpSense::LE, 0, RowTag::Core);
    if (opts.redundant_chain) {
      // Within a position, paying at least the (h+1)-th value implies
      // paying at least the h-th: implied by counting, kept as a helper.
      for (int l = 0; l < n; ++l)
        for (int h = 1; h < H; ++h)
          m.add_row(nm("cover_chain", l) + "_" + std::to_string(h),
                    {{uid[l][h - 1], 1.0}, {uid[l][h], -1.0}}, LpSense::GE, 0,
                    RowTag::RedundantChain);
    }
  }

  // ---------------- tree realization rows ----------------
  if (!opts.with_mu) {
    const double big = n;
    switch (opts.tree) {
      case TreeScheme::SUB:
        break;  // separated lazily; see the notes block
      case TreeScheme::MTZ: {
        if (f1) {
          for (int i = 0; i < n; ++i)
            m.add_row(nm("mtz_root", i), {{rid[i], 1.0}, {xid[i][i], -1.0}},
                      LpSense::LE, 0, RowTag::Tree);
          {
            std::vector<std::pair<int, double>> t;
            for (int i = 0; i < n; ++i) t.emplace_back(rid[i], 1.0);
            m.add_row("mtz_one_root", std::move(t), LpSense::EQ, 1,
                      RowTag::Tree);
          }
          // Every open non-root facility has one incoming arc.
          for (int i = 0; i < n; ++i) {
            std::vector<std::pair<int, double>> t;
            for (int j = 0; j < n; ++j)
              if (j != i) t.emplace_back(yid[j][i], 1.0);
            t.emplace_back(xid[i][i], -1.0);
            t.emplace_back(rid[i], 1.0);
            m.add_row(nm("mtz_indeg", i), std::move(t), LpSense::EQ, 0,
                      RowTag::Tree);
          }
        } else {
          // Fixed root: every other node has exactly one incoming arc.
          for (int i = 1; i < n; ++i) {
            std::vector<std::pair<int, double>> t;
            for (int j = 0; j < n; ++j)
              if (j != i) t.emplace_back(yid[j][i], 1.0);
            m.add_row(nm("mtz_indeg", i), std::move(t), LpSense::EQ, 1,
                      RowTag::Tree);
          }
        }
        for (int i = 0; i < n; ++i)
          for (int j = i + 1; j < n; ++j)
            m.add_row(nm("mtz_arc", i, j),
                      {{yid[i][j], 1.0}, {yid[j][i], 1.0}, {zid[i][j], -1.0}},
                      LpSense::EQ, 0, RowTag::Tree);
        // Levels increase along arcs (big-M deactivation otherwise).
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            m.add_row(nm("mtz_order", i, j),
                      {{lid[j], 1.0}, {lid[i], -1.0}, {yid[i][j], -big}},
                      LpSense::GE, 1 - big, RowTag::Tree);
          }
        break;
      }
      case TreeScheme::FLOW1: {
        if (f1)
          for (int i = 0; i < n; ++i)
            m.add_row(nm("flow_root", i), {{rid[i], 1.0}, {xid[i][i], -1.0}},
                      LpSense::LE, 0, RowTag::Tree);
        {
          std::vector<std::pair<int, double>> t;
          for (int i = 0; i < n; ++i) t.emplace_back(rid[i], 1.0);
          m.add_row("flow_one_root", std::move(t), LpSense::EQ, 1,
                    RowTag::Tree);
        }
        // The root injects one unit per other tree node; every tree node
        // absorbs one unit.
        for (int i = 0; i < n; ++i) {
          std::vector<std::pair<int, double>> t;
          for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            t.emplace_back(fid[i][j], 1.0);
            t.emplace_back(fid[j][i], -1.0);
          }
          if (f1) {
            t.emplace_back(rid[i], -static_cast<double>(p));
            t.emplace_back(xid[i][i], 1.0);
            m.add_row(nm("flow_bal", i), std::move(t), LpSense::EQ, 0,
                      RowTag::Tree);
          } else {
            t.emplace_back(rid[i], -static_cast<double>(n));
            m.add_row(nm("flow_bal", i), std::move(t), LpSense::EQ, -1,
                      RowTag::Tree);
          }
        }
        double cap = f1 ? p - 1 : n - 1;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            int a = std::min(i, j), b = std::max(i, j);
            m.add_row(nm("flow_cap", i, j),
                      {{fid[i][j], 1.0}, {zid[a][b], -cap}}, LpSense::LE, 0,
                      RowTag::Tree);
          }
        break;
      }
      case TreeScheme::FLOW2: {
        // Fixed source: for the facility tree the flows emanate from the
        // facility serving the first node; for the all-nodes tree from the
        // first node itself.
        for (int i = 0; i < n; ++i) {
          std::vector<std::pair<int, double>> t;
          for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            t.emplace_back(fid[i][j], 1.0);
            t.emplace_back(fid[j][i], -1.0);
          }
          if (f1) {
            if (i == 0)
              t.emplace_back(xid[0][0], 1.0 - p);
            else {
              t.emplace_back(xid[0][i], -static_cast<double>(p));
              t.emplace_back(xid[i][i], 1.0);
            }
            m.add_row(nm("flow_bal", i), std::move(t), LpSense::EQ, 0,
                      RowTag::Tree);
          } else {
            m.add_row(nm("flow_bal", i), std::move(t), LpSense::EQ,
                      i == 0 ? n - 1 : -1, RowTag::Tree);
          }
        }
        double cap = f1 ? p - 1 : n - 1;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            int a = std::min(i, j), b = std::max(i, j);
            m.add_row(nm("flow_cap", i, j),
                      {{fid[i][j], 1.0}, {zid[a][b], -cap}}, LpSense::LE, 0,
                      RowTag::Tree);
          }
        break;
      }
      case TreeScheme::KM: {
        // One arborescence per root candidate k: each selected edge is
        // oriented, nothing leaves k, and every other node has at most one
        // outgoing arc, which rules out cycles among selected edges.
        for (int k = 0; k < n; ++k)
          for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
              m.add_row(
                  nm("km_pair", k, i, j),
                  {{qid[k][i][j], 1.0}, {qid[k][j][i], 1.0}, {zid[i][j], -1.0}},
                  LpSense::EQ, 0, RowTag::Tree);
        for (int k = 0; k < n; ++k) {
          std::vector<std::pair<int, double>> t;
          for (int j = 0; j < n; ++j)
            if (j != k) t.emplace_back(qid[k][k][j], 1.0);
          m.add_row(nm("km_root", k), std::move(t), LpSense::LE, 0,
                    RowTag::Tree);
        }
        for (int k = 0; k < n; ++k)
          for (int i = 0; i < n; ++i) {
            if (i == k) continue;
            std::vector<std::pair<int, double>> t;
            for (int j = 0; j < n; ++j)
              if (j != i) t.emplace_back(qid[k][i][j], 1.0);
            m.add_row(nm("km_deg", k, i), std::move(t), LpSense::LE, 1,
                      RowTag::Tree);
          }
        break;
      }
    }
  }
  return m;
}

namespace {

struct SchemeInfo {
  Family family = Family::F1;
  SortingScheme sorting = SortingScheme::XL;
  TreeScheme tree = TreeScheme::SUB;
  bool with_mu = false;
};

// The first note line of a built model reads "model: f1_u_km  n=4 p=2";
// everything needed to embed a solution is recovered from it.
SchemeInfo scheme_from_notes(const Model& m) {
  for (const std::string& note : m.notes) {
    if (note.rfind("model: ", 0) != 0) continue;
    std::istringstream in(note.substr(7));
    std::string token;
    in >> token;
    std::vector<std::string> parts;
    std::string part;
    std::istringstream ts(token);
    while (std::getline(ts, part, '_')) parts.push_back(part);
    if (parts.size() != 3) break;
    SchemeInfo s;
    s.family = parse_family(parts[0]);
    s.sorting = parse_sorting(parts[1]);
    if (parts[2] == "master")
      s.with_mu = true;
    else
      s.tree = parse_tree(parts[2]);
    return s;
  }
  throw OmtError("model scheme",
                 "the model carries no scheme note; only models produced by "
                 "the builder can embed solutions");
}

}  // namespace

std::vector<double> lift_solution(const Model& m, const Instance& inst,
                                  const Solution& sol) {
  inst.validate();
  sol.validate(inst);
  const SchemeInfo scheme = scheme_from_notes(m);
  const int n = inst.n;
  const int p = inst.p;
  const auto& c = inst.cost;
  const bool f1 = scheme.family == Family::F1;

  std::vector<double> point(m.vars.size(), 0.0);
  auto set = [&](const std::string& name, double v) {
    point[m.var(name)] = v;
  };

  // Allocation: every node points at its serving facility (self for open).
  for (int i = 0; i < n; ++i) set(nm("x", i, sol.alloc[i]), 1.0);

  // Tree support: the facility tree alone, or with all allocation edges.
  std::vector<std::pair<int, int>> tree_edges = sol.tree_edges;
  if (!f1) {
    for (int i = 0; i < n; ++i) {
      if (sol.alloc[i] == i) continue;
      int a = std::min(i, sol.alloc[i]), b = std::max(i, sol.alloc[i]);
      tree_edges.emplace_back(a, b);
    }
  }
  double tree_cost = 0;
  for (auto [a, b] : sol.tree_edges) tree_cost += c[a][b];
  if (!scheme.with_mu)
    for (auto [a, b] : tree_edges) set(nm("z", a, b), 1.0);

  // Sorted allocation costs with client index as the tie break.
  std::vector<int> rank(n);
  std::iota(rank.begin(), rank.end(), 0);
  std::stable_sort(rank.begin(), rank.end(), [&](int a, int b) {
    return c[a][sol.alloc[a]] < c[b][sol.alloc[b]];
  });
  if (scheme.sorting == SortingScheme::XL) {
    for (int l = 0; l < n; ++l) {
      int i = rank[l];
      set(nm("xs", l, i, sol.alloc[i]), 1.0);
    }
  } else {
    CostLadder ladder = build_cost_ladder(c);
    std::vector<double> sorted_costs(n);
    for (int l = 0; l < n; ++l) sorted_costs[l] = c[rank[l]][sol.alloc[rank[l]]];
    std::vector<std::vector<double>> u = u_from_sorted_costs(sorted_costs, ladder);
    for (int l = 0; l < n; ++l)
      for (int h = 1; h <= ladder.H_size; ++h)
        set(nm("u", l) + "_" + std::to_string(h), u[l][h - 1]);
  }

  if (scheme.with_mu) {
    set("mu", tree_cost / (p - 1));
    return point;
  }

  // Realization values ride on a rooted view of the support tree.
  switch (scheme.tree) {
    case TreeScheme::SUB:
      break;
    case TreeScheme::MTZ: {
      int root = f1 ? sol.facilities.front() : 0;
      RootedTree t = root_tree(n, tree_edges, root);
      for (int v : t.order) {
        set(nm("l", v), 1.0 + t.depth[v]);
        if (t.parent[v] >= 0) set(nm("y", t.parent[v], v), 1.0);
      }
      if (f1) set(nm("r", root), 1.0);
      break;
    }
    case TreeScheme::FLOW1:
    case TreeScheme::FLOW2: {
      int root;
      if (scheme.tree == TreeScheme::FLOW1)
        root = f1 ? sol.facilities.front() : 0;
      else
        root = f1 ? sol.alloc[0] : 0;
      RootedTree t = root_tree(n, tree_edges, root);
      if (scheme.tree == TreeScheme::FLOW1) set(nm("r", root), 1.0);
      for (int v : t.order)
        if (t.parent[v] >= 0) set(nm("f", t.parent[v], v), t.subtree[v]);
      break;
    }
    case TreeScheme::KM: {
      for (int k = 0; k < n; ++k) {
        int root_k;
        if (f1)
          root_k = sol.alloc[k] == k ? k : sol.facilities.front();
        else
          root_k = k;
        RootedTree t = root_tree(n, tree_edges, root_k);
        // Arcs point toward the root: each non-root tree node sends its
        // unique arc to its parent.
        for (int v : t.order)
          if (t.parent[v] >= 0) set(nm("q", k, v, t.parent[v]), 1.0);
      }
      break;
    }
  }
  return point;
}

void add_subtour_row(Model& m, int n, const std::vector<int>& subset) {
  if (subset.empty() || static_cast<int>(subset.size()) >= n)
    throw OmtError("cut subset", "need a nonempty proper subset");
  if (!m.has_var("z_1_2"))
    throw OmtError("cut target", "the model carries no tree variables");
  std::vector<char> in(n, 0);
  for (int v : subset) in.at(v) = 1;
  std::vector<std::pair<int, double>> t;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (in[i] && in[j]) t.emplace_back(m.var(nm("z", i, j)), 1.0);
  m.add_row("sub_" + std::to_string(m.rows.size() + 1), std::move(t),
            LpSense::LE, static_cast<double>(subset.size()) - 1, RowTag::Tree);
}

void add_connection_row(Model& m, int n, const std::vector<int>& subset) {
  if (subset.empty() || static_cast<int>(subset.size()) >= n)
    throw OmtError("cut subset", "need a nonempty proper subset");
  if (!m.has_var("z_1_2"))
    throw OmtError("cut target", "the model carries no tree variables");
  std::vector<char> in(n, 0);
  for (int v : subset) in.at(v) = 1;
  std::vector<std::pair<int, double>> t;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j || in[i] == in[j]) continue;
      t.emplace_back(m.var(nm("x", i, j)), 1.0);
    }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (in[i] != in[j]) t.emplace_back(m.var(nm("z", i, j)), 1.0);
  m.add_row("conn_" + std::to_string(m.rows.size() + 1), std::move(t),
            LpSense::GE, 1, RowTag::Tree);
}

}  // namespace omt
