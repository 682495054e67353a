#include "omt/benders.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <set>
#include <sstream>

#include "omt/heuristics.hpp"
#include "omt/mst.hpp"
#include "omt/oracle.hpp"
#include "omt/simplex.hpp"

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

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

double BendersCut::bound_at(const std::vector<int>& subset) const {
  double v = rhs;
  for (int t : subset) v -= x_coef[t];
  return v;
}

Model build_master(const Instance& inst, SortingScheme sorting) {
  BuildOptions opts;
  opts.family = Family::F1;
  opts.sorting = sorting;
  opts.with_mu = true;
  return build_model(inst, opts);
}

Model build_km_primal(const Instance& inst,
                      const std::vector<double>& open_diag) {
  inst.validate();
  const int n = inst.n;
  if (static_cast<int>(open_diag.size()) != n)
    throw OmtError("opening vector", "need one value per node");
  Model m;
  m.name = "tree_subproblem";
  m.notes.push_back(
      "tree subproblem on a fixed opening vector: cheapest edge set of "
      "cardinality p-1 inside the open support, acyclic by orientation");
  std::vector<std::vector<int>> zid(n, std::vector<int>(n, -1));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      zid[i][j] = m.add_var(nm("z", i, j), inst.cost[i][j], 0, kInf,
                            VarKind::Continuous, VarTag::Z);
  std::vector<std::vector<std::vector<int>>> qid(
      n, std::vector<std::vector<int>>(n, std::vector<int>(n, -1)));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j && i != k && j != k)
          qid[k][i][j] = m.add_var(nm("q", k, i, j), 0, 0, kInf,
                                   VarKind::Continuous, VarTag::Q);
  {
    std::vector<std::pair<int, double>> t;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) t.emplace_back(zid[i][j], 1.0);
    m.add_row("card", std::move(t), LpSense::EQ, inst.p - 1, RowTag::Core);
  }
  // Edges only between open endpoints; the opening vector enters as the
  // right-hand side, so dual feasibility is independent of it.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      m.add_row(nm("tau", i, j), {{zid[i][j], 1.0}}, LpSense::LE,
                open_diag[i], RowTag::Core);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      m.add_row(nm("eta", i, j), {{zid[i][j], 1.0}}, LpSense::LE,
                open_diag[j], RowTag::Core);
  // For every root candidate k, node i sends at most one arc; its edge
  // toward k competes with the outgoing arcs.
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) {
      if (i == k) continue;
      std::vector<std::pair<int, double>> t;
      int a = std::min(i, k), b = std::max(i, k);
      t.emplace_back(zid[a][b], 1.0);
      for (int j = 0; j < n; ++j)
        if (j != i && j != k) t.emplace_back(qid[k][i][j], 1.0);
      m.add_row(nm("beta", k, i), std::move(t), LpSense::LE, 1,
                RowTag::Core);
    }
  // Selected edges away from k are oriented one way or the other.
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        if (i == k || j == k) continue;
        m.add_row(nm("gamma", k, i, j),
                  {{qid[k][i][j], 1.0}, {qid[k][j][i], 1.0}, {zid[i][j], -1.0}},
                  LpSense::EQ, 0, RowTag::Core);
      }
  return m;
}

Model build_sp_dual(const Instance& inst,
                    const std::vector<double>& open_diag) {
  inst.validate();
  const int n = inst.n;
  if (static_cast<int>(open_diag.size()) != n)
    throw OmtError("opening vector", "need one value per node");
  Model m;
  m.name = "tree_subproblem_dual";
  m.maximize = true;
  m.notes.push_back(
      "dual of the tree subproblem; its optimum matches the primal tree "
      "cost and its rays price the opening variables into cuts");
  int alpha = m.add_var("alpha", inst.p - 1, -kInf, kInf,
                        VarKind::Continuous, VarTag::Other);
  std::vector<std::vector<int>> bid(n, std::vector<int>(n, -1));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      if (i != k)
        bid[k][i] = m.add_var(nm("beta", k, i), -1.0, 0, kInf,
                              VarKind::Continuous, VarTag::Other);
  std::vector<std::vector<std::vector<int>>> gid(
      n, std::vector<std::vector<int>>(n, std::vector<int>(n, -1)));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (i != k && j != k)
          gid[k][i][j] = m.add_var(nm("gamma", k, i, j), 0, -kInf, kInf,
                                   VarKind::Continuous, VarTag::Other);
  std::vector<std::vector<int>> tid(n, std::vector<int>(n, -1));
  std::vector<std::vector<int>> eid(n, std::vector<int>(n, -1));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      tid[i][j] = m.add_var(nm("tau", i, j), -open_diag[i], 0, kInf,
                            VarKind::Continuous, VarTag::Other);
      eid[i][j] = m.add_var(nm("eta", i, j), -open_diag[j], 0, kInf,
                            VarKind::Continuous, VarTag::Other);
    }
  // One row per edge variable of the primal...
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      std::vector<std::pair<int, double>> t;
      t.emplace_back(alpha, 1.0);
      t.emplace_back(bid[i][j], -1.0);
      t.emplace_back(bid[j][i], -1.0);
      for (int k = 0; k < n; ++k)
        if (k != i && k != j) t.emplace_back(gid[k][i][j], -1.0);
      t.emplace_back(tid[i][j], -1.0);
      t.emplace_back(eid[i][j], -1.0);
      m.add_row(nm("edge", i, j), std::move(t), LpSense::LE, inst.cost[i][j],
                RowTag::Core);
    }
  // ...and one per orientation variable.
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j || i == k || j == k) continue;
        int a = std::min(i, j), b = std::max(i, j);
        m.add_row(nm("arc", k, i, j),
                  {{gid[k][a][b], 1.0}, {bid[k][i], -1.0}}, LpSense::LE, 0,
                  RowTag::Core);
      }
  return m;
}

SubproblemDuals solve_subproblem(const Instance& inst,
                                 const std::vector<double>& open_diag) {
  Model primal = build_km_primal(inst, open_diag);
  LpResult lp = solve_lp(primal.to_lp());
  if (lp.status != LpStatus::Optimal)
    throw OmtError("tree subproblem",
                   "the subproblem must be solvable for any opening vector");
  const int n = inst.n;
  SubproblemDuals d;
  d.objective = lp.objective;
  d.beta.assign(n, std::vector<double>(n, 0.0));
  d.tau.assign(n, std::vector<double>(n, 0.0));
  d.eta.assign(n, std::vector<double>(n, 0.0));
  // Row order mirrors the builder: card, tau block, eta block, beta
  // block, gamma block.  Inequality multipliers are <= 0 in the solver's
  // convention and flip sign here.
  std::size_t r = 0;
  d.alpha = lp.duals[r++];
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) d.tau[i][j] = -lp.duals[r++];
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) d.eta[i][j] = -lp.duals[r++];
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      if (i != k) d.beta[k][i] = -lp.duals[r++];
  return d;
}

BendersCut make_cut(const Instance& inst, CutKind kind,
                    const std::vector<int>& generator,
                    const SubproblemDuals& duals) {
  const int n = inst.n;
  const double scale = 1.0 / (inst.p - 1);
  BendersCut cut;
  cut.kind = kind;
  cut.generator = generator;
  std::sort(cut.generator.begin(), cut.generator.end());
  cut.x_coef.assign(n, 0.0);
  if (kind == CutKind::Dual) {
    for (int t = 0; t < n; ++t) {
      double couple = 0;
      for (int j = t + 1; j < n; ++j) couple += duals.tau[t][j];
      for (int i = 0; i < t; ++i) couple += duals.eta[i][t];
      cut.x_coef[t] = couple * scale;
    }
    double beta_sum = 0;
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) beta_sum += duals.beta[k][i];
    cut.rhs = duals.alpha - beta_sum * scale;
  } else {
    double theta = duals.objective * scale;
    for (int t : cut.generator) cut.x_coef[t] = -theta;
    cut.rhs = -theta * (inst.p - 1);
  }
  return cut;
}

void add_cut_rows(Model& master, const std::vector<BendersCut>& pool) {
  int mu = master.var("mu");
  int idx = 0;
  for (const BendersCut& cut : pool) {
    std::vector<std::pair<int, double>> t;
    t.emplace_back(mu, 1.0);
    for (std::size_t v = 0; v < cut.x_coef.size(); ++v)
      if (cut.x_coef[v] != 0.0)
        t.emplace_back(master.var(nm("x", static_cast<int>(v),
                                     static_cast<int>(v))),
                       cut.x_coef[v]);
    master.add_row("cut_" + std::to_string(++idx), std::move(t), LpSense::GE,
                   cut.rhs, RowTag::Master);
  }
}

namespace {

struct MasterPick {
  std::vector<int> subset;
  double ordered = 0.0;  // allocation part at the pick
  double mu = 0.0;       // surrogate value at the pick
  bool complete = true;  // whole subset family scanned
};

// Exact master by enumeration: every opening set is scored by its
// nearest-allocation ordered part plus the largest mu any pool cut
// forces (at least 0).  Deterministic: ties keep the colex-first set.
MasterPick solve_master_enumeration(const Instance& inst,
                                    const std::vector<BendersCut>& pool,
                                    double time_budget) {
  auto t0 = std::chrono::steady_clock::now();
  MasterPick best;
  double best_v = kInf;
  std::vector<int> subset(inst.p);
  for (int i = 0; i < inst.p; ++i) subset[i] = i;
  std::uint64_t scanned = 0;
  do {
    double mu = 0;
    for (const BendersCut& cut : pool)
      mu = std::max(mu, cut.bound_at(subset));
    double ordered = search_score(inst, subset, SearchMode::Ordered);
    double v = ordered + mu;
    if (v < best_v - kObjTol) {
      best_v = v;
      best.subset = subset;
      best.ordered = ordered;
      best.mu = mu;
    }
    if ((++scanned & 1023) == 0 && seconds_since(t0) > time_budget) {
      best.complete = false;
      break;
    }
  } while (next_colex(subset, inst.n));
  return best;
}

}  // namespace

BendersResult benders_solve(const Instance& inst, const BendersOptions& opts) {
  inst.validate();
  auto t0 = std::chrono::steady_clock::now();
  const std::uint64_t max_iter =
      opts.max_iterations ? opts.max_iterations
                          : binomial(inst.n, inst.p) + 1;
  BendersResult res;
  res.lower_bound = 0.0;
  res.upper_bound = kInf;
  std::set<std::vector<int>> generated;
  while (res.iterations < max_iter) {
    if (seconds_since(t0) >= opts.max_time) break;
    MasterPick pick = solve_master_enumeration(
        inst, res.pool,
        std::min(opts.master_time, opts.max_time - seconds_since(t0)));
    ++res.iterations;
    // A partial master scan yields no valid lower bound; the accepted
    // master gap widens the comparison instead of shifting the bound.
    if (pick.complete) {
      double lb = (pick.ordered + pick.mu) * (1.0 - opts.master_gap);
      res.lower_bound = std::max(res.lower_bound, lb);
    }
    Solution cand = subset_solution(inst, pick.subset);
    double cand_obj = evaluate_objective(inst, cand);
    if (cand_obj < res.upper_bound - kObjTol) {
      res.upper_bound = cand_obj;
      res.objective = cand_obj;
      res.best = cand;
    }
    if (res.upper_bound - res.lower_bound <=
        opts.max_gap * std::abs(res.upper_bound) + kObjTol) {
      res.converged = true;
      if (opts.trace)
        res.trace.push_back({res.iterations, res.lower_bound,
                             res.upper_bound, pick.subset, opts.cut});
      break;
    }
    if (!generated.count(pick.subset)) {
      if (opts.cut == CutKind::Dual) {
        std::vector<double> open_diag(inst.n, 0.0);
        for (int t : pick.subset) open_diag[t] = 1.0;
        SubproblemDuals duals = solve_subproblem(inst, open_diag);
        res.pool.push_back(make_cut(inst, opts.cut, pick.subset, duals));
      } else {
        // The classical cut needs the subproblem objective only, which
        // for an integer opening vector is the spanning-tree cost.
        SubproblemDuals duals;
        duals.objective = kruskal_mst(inst, pick.subset).cost;
        res.pool.push_back(make_cut(inst, opts.cut, pick.subset, duals));
      }
      generated.insert(pick.subset);
    }
    if (opts.trace)
      res.trace.push_back({res.iterations, res.lower_bound, res.upper_bound,
                           pick.subset, opts.cut});
  }
  if (!res.converged &&
      res.upper_bound - res.lower_bound <=
          opts.max_gap * std::abs(res.upper_bound) + kObjTol &&
      std::isfinite(res.upper_bound))
    res.converged = true;
  return res;
}

std::vector<BendersCut> warm_start(const Instance& inst,
                                   const BendersOptions& opts) {
  if (opts.max_time <= 0) return {};
  return benders_solve(inst, opts).pool;
}

void write_bound_trace(std::ostream& out, const BendersResult& res) {
  out << "iteration,LB,UB,subset,cut_kind\n";
  for (const BendersIterate& it : res.trace) {
    std::ostringstream subset;
    for (std::size_t i = 0; i < it.subset.size(); ++i) {
      if (i) subset << '+';
      subset << it.subset[i] + 1;
    }
    out << it.iteration << ',' << it.lower << ',' << it.upper << ','
        << subset.str() << ','
        << (it.kind == CutKind::Dual ? "dual" : "classical") << '\n';
  }
}

}  // namespace omt
