// Acceptance gate: one test case per shipping criterion, each printing
// exactly one "[criterion N] PASS/FAIL — ..." line.  Tolerances are
// pinned in the code next to the values they guard.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "omt/benders.hpp"
#include "omt/covering.hpp"
#include "omt/formulations.hpp"
#include "omt/heuristics.hpp"
#include "omt/instance.hpp"
#include "omt/model.hpp"
#include "omt/mst.hpp"
#include "omt/oracle.hpp"
#include "omt/preprocessing.hpp"
#include "omt/simplex.hpp"

using namespace omt;

// Records the sub-check in the test log and folds it into the criterion
// verdict.
#define ACC(...)                    \
  do {                              \
    bool acc_ok_ = (__VA_ARGS__);   \
    CHECK(acc_ok_);                 \
    ok = ok && acc_ok_;             \
  } while (0)

namespace {

std::string fixture(const char* name) {
  return std::string(OMT_FIXTURE_DIR) + "/" + name;
}

void report(int k, bool ok, const char* what) {
  std::printf("[criterion %d] %s — %s\n", k, ok ? "PASS" : "FAIL", what);
  std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// Integral sorted-allocation point of a feasible solution (stable sort,
// client index breaks cost ties).
SortedAssignment lift_sorted(const Instance& inst, const Solution& sol) {
  const int n = inst.n;
  SortedAssignment sa;
  sa.x.assign(n, std::vector<double>(n, 0.0));
  sa.z.assign(n, std::vector<double>(n, 0.0));
  sa.xl.assign(n, std::vector<std::vector<double>>(
                      n, std::vector<double>(n, 0.0)));
  for (int i = 0; i < n; ++i) sa.x[i][sol.alloc[i]] = 1.0;
  for (auto [i, j] : sol.tree_edges) sa.z[i][j] = sa.z[j][i] = 1.0;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return inst.cost[a][sol.alloc[a]] < inst.cost[b][sol.alloc[b]];
  });
  for (int l = 0; l < n; ++l)
    sa.xl[l][order[l]][sol.alloc[order[l]]] = 1.0;
  return sa;
}

std::vector<std::vector<double>> covering_image(const Instance& inst,
                                                const Solution& sol,
                                                const CostLadder& lad) {
  std::vector<double> d(inst.n);
  for (int i = 0; i < inst.n; ++i) d[i] = inst.cost[i][sol.alloc[i]];
  std::sort(d.begin(), d.end());
  return u_from_sorted_costs(d, lad);
}

}  // namespace

TEST_CASE("criterion 1: ten-node reference optima per rank-weight family") {
  bool ok = true;
  auto t0 = std::chrono::steady_clock::now();
  Instance inst = load_instance_json(fixture("ten_node.json"));

  ACC(std::abs(solve_exact(inst).objective - 18.3) <= 0.05);
  Instance kc = inst;
  kc.lambda = build_lambda(Criterion::KCentrum, 10);
  ACC(std::abs(solve_exact(kc).objective - 26.0) <= 0.05);
  Instance kt = inst;
  kt.lambda = build_lambda(Criterion::KTrimmed, 10);
  ACC(std::abs(solve_exact(kt).objective - 16.0) <= 0.05);
  ACC(seconds_since(t0) < 5.0);

  report(1, ok,
         "exact optima 18.3 / 26.0 / 16.0 (tol 0.05) on the ten-node "
         "instance within 5 s");
}

TEST_CASE("criterion 2: four-node worked example end to end") {
  bool ok = true;
  auto t0 = std::chrono::steady_clock::now();
  Instance inst = load_instance_json(fixture("four_node.json"));

  OracleResult r = solve_exact(inst);
  ACC(r.best.facilities == std::vector<int>{0, 2});
  ACC(std::abs(r.objective - 2.0) <= 1e-9);

  CostLadder lad = build_cost_ladder(inst.cost);
  auto u = covering_image(inst, r.best, lad);
  const std::vector<std::vector<double>> want_u = {
      {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}, {1, 1, 0, 0, 0}, {1, 1, 0, 0, 0}};
  ACC(u == want_u);

  FixingMatrix fx = compute_fixing(inst);
  ACC(fx.H1 == std::vector<int>{2, 3, 4, 4, 4});
  ACC(fx.H0 == std::vector<int>{4, 4, 4, 4, 3});
  const char* want_rows[] = {"00000", "00000", "1...0", "11..."};
  for (int l = 1; l <= 4; ++l) {
    std::string row;
    for (int h = 1; h <= 5; ++h) {
      FixState st = fx.state[l - 1][h - 1];
      row += (st == FixState::Fixed0)   ? '0'
             : (st == FixState::Fixed1) ? '1'
                                        : '.';
    }
    ACC(row == want_rows[l - 1]);
  }
  ACC(seconds_since(t0) < 1.0);

  report(2, ok,
         "optimum {1,3} at 2.0, exact covering image, position bounds and "
         "fixing matrix within 1 s");
}

TEST_CASE("criterion 3: closed-form model sizes and the scheme crossover") {
  bool ok = true;
  for (int n = 3; n <= 12; ++n) {
    const int upper = n * (n - 1) / 2;
    std::set<int> targets = {1, 2, std::min(n, upper),
                             std::min(n + 1, upper), upper};
    for (int target_h : targets) {
      Instance inst;
      inst.n = n;
      inst.p = 2;
      inst.cost.assign(n, std::vector<double>(n, 0.0));
      int k = 0;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          inst.cost[i][j] = inst.cost[j][i] = 1 + (k % target_h);
          ++k;
        }
      inst.lambda = build_lambda(Criterion::Median, n);
      ACC(build_cost_ladder(inst.cost).H_size == target_h);
      for (SortingScheme sort : {SortingScheme::XL, SortingScheme::U}) {
        BuildOptions opts;
        opts.sorting = sort;
        Model m = build_model(inst, opts);
        SizePrediction want =
            predicted_size(Family::F1, sort, n, target_h);
        ACC(m.structural_var_count() == want.variables);
        ACC(m.core_row_count() == want.constraints);
      }
    }
    // Crossover: with H = n+1 ladder values the covering scheme needs
    // n-1 rows fewer; one more value and it needs one row more.
    if (n >= 4) {
      long long xl =
          predicted_size(Family::F1, SortingScheme::XL, n, 1).constraints;
      ACC(predicted_size(Family::F1, SortingScheme::U, n, n + 1)
              .constraints -
              xl ==
          1 - n);
      ACC(predicted_size(Family::F1, SortingScheme::U, n, n + 2)
              .constraints -
              xl ==
          1);
    }
  }
  report(3, ok,
         "structural sizes match the closed forms for n = 3..12 across "
         "five tie patterns; covering/position row crossover at ladder "
         "size n+1");
}

TEST_CASE("criterion 4: every formulation embeds every optimum exactly") {
  bool ok = true;
  for (unsigned long long seed = 1; seed <= 20; ++seed) {
    int n = 4 + static_cast<int>(seed % 4);  // 4..7
    int p = 2 + static_cast<int>(seed % 2);  // 2..3
    Criterion crit = static_cast<Criterion>(seed % 3);
    Instance inst = generate_instance(n, p, 8000 + seed, crit, 1, 50);
    double exact = solve_exact(inst).objective;

    for (Family fam : {Family::F1, Family::F2})
      for (SortingScheme sort : {SortingScheme::XL, SortingScheme::U})
        for (TreeScheme tree : {TreeScheme::MTZ, TreeScheme::FLOW1,
                                TreeScheme::FLOW2, TreeScheme::KM}) {
          BuildOptions opts;
          opts.family = fam;
          opts.sorting = sort;
          opts.tree = tree;
          Model m = build_model(inst, opts);
          double best = std::numeric_limits<double>::infinity();
          std::vector<int> subset(p);
          for (int i = 0; i < p; ++i) subset[i] = i;
          do {
            Solution sol = subset_solution(inst, subset);
            std::vector<double> point = lift_solution(m, inst, sol);
            ACC(check_point(m, point).empty());
            double v = objective_value(m, point);
            double truth = evaluate_objective(inst, sol);
            ACC(std::abs(v - truth) <= 1e-9 * (1.0 + std::abs(truth)));
            best = std::min(best, v);
          } while (next_colex(subset, n));
          ACC(std::abs(best - exact) <= 1e-9 * (1.0 + std::abs(exact)));
        }
  }
  report(4, ok,
         "all 16 family/sorting/realization models price every opening "
         "set like the enumeration oracle (rel. 1e-9) with zero lifted "
         "violations, 20 random instances n = 4..7");
}

TEST_CASE("criterion 5: encoding maps preserve cost and expose the gap") {
  bool ok = true;

  // Cost preservation under the covering map on random lifted points.
  for (unsigned long long seed = 1; seed <= 25; ++seed) {
    int n = 4 + static_cast<int>(seed % 2);  // 4..5
    Instance inst = generate_instance(n, 2, 8100 + seed, Criterion::Median,
                                      1, 30);
    CostLadder lad = build_cost_ladder(inst.cost);
    std::vector<int> subset = {0, static_cast<int>(1 + seed % (n - 1))};
    std::sort(subset.begin(), subset.end());
    Solution sol = subset_solution(inst, subset);
    SortedAssignment sa = lift_sorted(inst, sol);
    CoveringAssignment ca = map_f(sa, inst.cost, lad);
    double vx = ordered_cost_xl(sa.xl, inst.cost, inst.lambda);
    double vu = ordered_cost_u(ca.u, lad, inst.lambda);
    ACC(std::abs(vx - vu) <= 1e-9 * (1.0 + std::abs(vx)));
    // Round trips: covering -> sorted -> covering is the identity on
    // feasible points; sorted -> covering -> sorted recovers vertices.
    SortedAssignment back = map_g(ca, inst.cost, lad);
    CoveringAssignment ca2 = map_f(back, inst.cost, lad);
    for (int l = 0; l < n; ++l)
      for (int h = 0; h < lad.H_size; ++h)
        ACC(std::abs(ca2.u[l][h] - ca.u[l][h]) <= 1e-9);
  }

  // Tie-free matrices: the telescoping inverse equals the general
  // reconstruction.
  {
    CostMatrix c = {{0, 7, 11}, {3, 5, 13}, {17, 2, 9}};
    CostLadder lad = build_cost_ladder(c);
    SortedAssignment sa;
    sa.x.assign(3, std::vector<double>(3, 0.0));
    sa.z.assign(3, std::vector<double>(3, 0.0));
    sa.xl.assign(3, std::vector<std::vector<double>>(
                        3, std::vector<double>(3, 0.0)));
    sa.xl[0][0][0] = sa.xl[1][1][1] = sa.xl[2][1][2] = 1.0;
    sa.x[0][0] = sa.x[1][1] = sa.x[1][2] = 1.0;
    CoveringAssignment ca = map_f(sa, c, lad);
    SortedAssignment g = map_g(ca, c, lad);
    SortedAssignment inv = map_f_inverse_noties(ca, c, lad);
    for (int l = 0; l < 3; ++l)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          ACC(std::abs(g.xl[l][i][j] - sa.xl[l][i][j]) <= 1e-12);
          ACC(std::abs(inv.xl[l][i][j] - sa.xl[l][i][j]) <= 1e-12);
        }
  }

  // The documented fractional point: all basic sorting rows hold, yet
  // the covering image violates rank monotonicity at cell (1,4).
  {
    CostMatrix c = {{0, 4, 8}, {3, 1, 6}, {9, 5, 2}};
    CostLadder lad = build_cost_ladder(c);
    SortedAssignment sa;
    sa.x.assign(3, std::vector<double>(3, 0.0));
    sa.z.assign(3, std::vector<double>(3, 0.0));
    sa.xl.assign(3, std::vector<std::vector<double>>(
                        3, std::vector<double>(3, 0.0)));
    sa.xl[0][0][0] = 0.9;
    sa.xl[2][0][0] = 0.1;
    sa.xl[1][1][0] = 1.0;
    sa.xl[0][2][0] = 0.1;
    sa.xl[2][2][0] = 0.9;
    double prev = -1.0;
    for (int l = 0; l < 3; ++l) {
      double mass = 0.0, cost_l = 0.0;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          mass += sa.xl[l][i][j];
          cost_l += c[i][j] * sa.xl[l][i][j];
        }
      ACC(std::abs(mass - 1.0) <= 1e-12);  // fill rows hold
      ACC(cost_l >= prev - 1e-12);         // ordering rows hold
      prev = cost_l;
    }
    auto viol = first_rank_monotonicity_violation(map_f(sa, c, lad).u);
    ACC(viol.has_value());
    ACC(viol.has_value() && viol->first == 0 && viol->second == 4);
  }

  report(5, ok,
         "covering map preserves rank-weighted cost (rel. 1e-9), both "
         "round trips are identities on their domains, and the weaker "
         "sorted encoding admits a point whose covering image breaks "
         "rank monotonicity at (1,4)");
}

TEST_CASE("criterion 6: decomposition machinery") {
  bool ok = true;

  // Strong duality on 200 random (instance, opening set) pairs.
  int pairs = 0;
  for (unsigned long long seed = 1; pairs < 200; ++seed) {
    int n = 4 + static_cast<int>(seed % 4);
    int p = 2 + static_cast<int>(seed % 3);
    Instance inst = generate_instance(n, p, 8200 + seed, Criterion::Median,
                                      1, 45);
    std::vector<int> subset =
        unrank_colex((seed * 37) % binomial(n, p), n, p);
    std::vector<double> open(n, 0.0);
    for (int v : subset) open[v] = 1.0;
    double mst = kruskal_mst(inst, subset).cost;
    SubproblemDuals sp = solve_subproblem(inst, open);
    ACC(std::abs(sp.objective - mst) <= 1e-6 * (1.0 + std::abs(mst)));
    LpResult dual = solve_lp(build_sp_dual(inst, open).to_lp());
    ACC(dual.status == LpStatus::Optimal &&
        std::abs(dual.objective - mst) <= 1e-6 * (1.0 + std::abs(mst)));
    ++pairs;
  }

  // Cut validity on every opening set, both families, up to n = 8.
  for (unsigned long long seed = 1; seed <= 6; ++seed) {
    int n = 6 + static_cast<int>(seed % 3);  // 6..8
    int p = 2 + static_cast<int>(seed % 3);
    Instance inst = generate_instance(n, p, 8300 + seed, Criterion::Median,
                                      1, 35);
    std::vector<int> gen = unrank_colex((seed * 13) % binomial(n, p), n, p);
    std::vector<double> open(n, 0.0);
    for (int v : gen) open[v] = 1.0;
    SubproblemDuals sp = solve_subproblem(inst, open);
    for (CutKind kind : {CutKind::Classical, CutKind::Dual}) {
      BendersCut cut = make_cut(inst, kind, gen, sp);
      std::vector<int> subset(p);
      for (int i = 0; i < p; ++i) subset[i] = i;
      do {
        double truth = kruskal_mst(inst, subset).cost / (p - 1);
        ACC(cut.bound_at(subset) <= truth + 1e-6);
      } while (next_colex(subset, n));
      double gen_truth = kruskal_mst(inst, gen).cost / (p - 1);
      ACC(std::abs(cut.bound_at(gen) - gen_truth) <=
          1e-6 * (1.0 + gen_truth));
    }
  }

  // The classical loop reaches the oracle with monotone bounds.
  for (unsigned long long seed = 1; seed <= 20; ++seed) {
    int n = 5 + static_cast<int>(seed % 3);
    int p = 2 + static_cast<int>(seed % 3);
    Instance inst = generate_instance(n, p, 8400 + seed, Criterion::KCentrum,
                                      1, 80);
    double exact = solve_exact(inst).objective;
    BendersOptions opts;
    opts.cut = CutKind::Classical;
    BendersResult res = benders_solve(inst, opts);
    ACC(res.converged);
    ACC(std::abs(res.objective - exact) <= 1e-9 * (1.0 + std::abs(exact)));
    for (size_t i = 1; i < res.trace.size(); ++i) {
      ACC(res.trace[i].lower >= res.trace[i - 1].lower - 1e-12);
      ACC(res.trace[i].upper <= res.trace[i - 1].upper + 1e-12);
    }
  }

  // The worked four-node example needs only a handful of cuts.
  Instance ab = load_instance_json(fixture("four_node.json"));
  BendersResult ab_res = benders_solve(ab, {});
  ACC(ab_res.converged);
  ACC(std::abs(ab_res.objective - 2.0) <= 1e-9);
  ACC(ab_res.pool.size() <= 6);

  report(6, ok,
         "tree subproblem strong duality (1e-6, 200 pairs), both cut "
         "families valid and tight, classical loop matches the oracle on "
         "20 instances with monotone bounds, four-node example converges "
         "within 6 cuts");
}

TEST_CASE("criterion 7: fixing validity against exhaustive enumeration") {
  bool ok = true;
  for (unsigned long long seed = 1; seed <= 50; ++seed) {
    int n = 5 + static_cast<int>(seed % 3);  // 5..7
    int p = 2 + static_cast<int>(seed % 3);  // 2..4
    Criterion crit = static_cast<Criterion>(seed % 3);
    Instance inst = generate_instance(n, p, 8500 + seed, crit, 1, 10);
    CostLadder lad = build_cost_ladder(inst.cost);
    FixingMatrix fx = compute_fixing(inst);
    ACC(fx.exact && fx.H == lad.H_size);

    std::vector<int> subset(p);
    for (int i = 0; i < p; ++i) subset[i] = i;
    do {
      auto u = covering_image(inst, subset_solution(inst, subset), lad);
      for (int l = 1; l <= n; ++l)
        for (int h = 1; h <= fx.H; ++h) {
          FixState st = fx.state[l - 1][h - 1];
          if (st == FixState::Fixed1) ACC(u[l - 1][h - 1] == 1.0);
          if (st == FixState::Fixed0) ACC(u[l - 1][h - 1] == 0.0);
        }
    } while (next_colex(subset, n));
  }
  report(7, ok,
         "every cell fixed by the position bounds holds in every feasible "
         "covering image, 50 random instances, all opening sets");
}

TEST_CASE("criterion 8: heuristic feasibility, dominance, descent") {
  bool ok = true;
  int fuzzed = 0;
  for (unsigned long long seed = 1; seed <= 500; ++seed) {
    int n = 4 + static_cast<int>(seed % 9);        // 4..12
    int p = 2 + static_cast<int>(seed % (n - 1));  // 2..n
    Criterion crit = static_cast<Criterion>(seed % 3);
    Instance inst = generate_instance(n, p, 8600 + seed, crit, 1, 30);
    for (SearchMode mode :
         {SearchMode::Ordered, SearchMode::OrderedPlusTree}) {
      HeuristicResult r = local_search(inst, mode);
      bool valid = true;
      try {
        r.solution.validate(inst);
      } catch (const OmtError&) {
        valid = false;
      }
      ACC(valid);
      double prev = r.seed_score;
      for (const HeuristicMove& mv : r.trace) {
        ACC(mv.score_after < prev - 1e-9);
        prev = mv.score_after;
      }
      ++fuzzed;
    }
  }
  ACC(fuzzed == 1000);

  for (unsigned long long seed = 1; seed <= 15; ++seed) {
    int n = 5 + static_cast<int>(seed % 4);
    int p = 2 + static_cast<int>(seed % 3);
    Instance inst = generate_instance(n, p, 8700 + seed, Criterion::KTrimmed,
                                      1, 99);
    double exact = solve_exact(inst).objective;
    ACC(heuristic_domp_mst(inst).objective >= exact - 1e-9);
    ACC(heuristic_pmedt_domp(inst).objective >= exact - 1e-9);
  }
  report(8, ok,
         "1000 fuzzed runs all feasible with strictly descending accepted "
         "moves; heuristic values never beat the enumeration oracle");
}

TEST_CASE("criterion 9: scale disclosure and gap-metric spot checks") {
  bool ok = true;
  // Published gaps for the exact-method row (|V|=50, p=12, instance 2).
  GapMetrics g = gap_metrics(6910.4, 5482.3, 5594.1, 3372.3, 5594.1);
  ACC(std::abs(g.gUL - 20.7) <= 0.05);
  ACC(std::abs(g.gUR - 39.7) <= 0.05);

  report(9, ok,
         "gap metrics reproduce the published row to 0.05; scale "
         "disclosure below");
  std::printf(
      "    The solver-benchmark result tables (hour-long runs on "
      "instances up to 100 nodes under a commercial MIP engine) are out "
      "of scope for this desk-scale library and are not reproduced.\n"
      "    Substituted evidence: formulation correctness is established "
      "by exhaustive-enumeration equivalence and embedding checks at "
      "desk scale (criteria 3-6), and the published gap columns are "
      "reproduced from their defining formulas above.\n");
  std::fflush(stdout);
}
