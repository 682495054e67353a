// Variable-fixing tests: the exact worst-case position bounds on the
// four-node instance, parallel/serial agreement, validity of every fixed
// cell against exhaustive enumeration, bound monotonicity, the budget
// fallback, and bound application to a built model.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <string>
#include <vector>

#include "omt/covering.hpp"
#include "omt/formulations.hpp"
#include "omt/instance.hpp"
#include "omt/model.hpp"
#include "omt/oracle.hpp"
#include "omt/preprocessing.hpp"

using namespace omt;

namespace {

std::string fixture(const char* name) {
  return std::string(OMT_FIXTURE_DIR) + "/" + name;
}

std::string row_string(const FixingMatrix& fx, int l) {
  std::string s;
  for (int h = 1; h <= fx.H; ++h) {
    FixState st = fx.state[l - 1][h - 1];
    s += (st == FixState::Fixed0) ? '0' : (st == FixState::Fixed1) ? '1' : '.';
  }
  return s;
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

TEST_CASE("four-node instance: exact bounds and fixing matrix") {
  Instance inst = load_instance_json(fixture("four_node.json"));
  FixingMatrix fx = compute_fixing(inst);
  CHECK(fx.n == 4);
  CHECK(fx.H == 5);
  CHECK(fx.exact);
  CHECK(fx.H1 == std::vector<int>{2, 3, 4, 4, 4});
  CHECK(fx.H0 == std::vector<int>{4, 4, 4, 4, 3});
  CHECK(row_string(fx, 1) == "00000");
  CHECK(row_string(fx, 2) == "00000");
  CHECK(row_string(fx, 3) == "1...0");
  CHECK(row_string(fx, 4) == "11...");
  CHECK(fx.fixed0_count() == 11);
  CHECK(fx.fixed1_count() == 3);
}

TEST_CASE("parallel and serial fixing agree") {
  for (unsigned long long seed = 1; seed <= 12; ++seed) {
    int n = 5 + static_cast<int>(seed % 3);
    int p = 2 + static_cast<int>(seed % 2);
    Instance inst = generate_instance(n, p, 400 + seed, Criterion::Median,
                                      1, 12);
    FixingMatrix par = compute_fixing(inst);
    FixingMatrix ser = compute_fixing_serial(inst);
    CHECK(par.H1 == ser.H1);
    CHECK(par.H0 == ser.H0);
    CHECK(par.state == ser.state);
    CHECK(par.exact == ser.exact);
  }
}

TEST_CASE("every fixed cell holds in every feasible covering image") {
  for (unsigned long long seed = 1; seed <= 15; ++seed) {
    int n = 5 + static_cast<int>(seed % 3);  // 5..7
    int p = 2 + static_cast<int>(seed % 3);  // 2..4
    Instance inst = generate_instance(n, p, 700 + seed, Criterion::KTrimmed,
                                      1, 8);  // narrow range forces ties
    CostLadder lad = build_cost_ladder(inst.cost);
    FixingMatrix fx = compute_fixing(inst);
    REQUIRE(fx.H == lad.H_size);

    std::vector<int> subset(p);
    for (int i = 0; i < p; ++i) subset[i] = i;
    do {
      Solution sol = subset_solution(inst, subset);
      auto u = covering_image(inst, sol, lad);
      for (int l = 1; l <= n; ++l)
        for (int h = 1; h <= fx.H; ++h) {
          FixState st = fx.state[l - 1][h - 1];
          if (st == FixState::Fixed1) {
            CAPTURE(seed);
            CAPTURE(l);
            CAPTURE(h);
            CHECK(u[l - 1][h - 1] == 1.0);
          } else if (st == FixState::Fixed0) {
            CAPTURE(seed);
            CAPTURE(l);
            CAPTURE(h);
            CHECK(u[l - 1][h - 1] == 0.0);
          }
        }
    } while (next_colex(subset, n));
  }
}

TEST_CASE("bound shapes: ranges, monotonicity, first-rung saturation") {
  for (unsigned long long seed = 21; seed <= 30; ++seed) {
    Instance inst = generate_instance(6, 3, seed, Criterion::Median, 1, 50);
    FixingMatrix fx = compute_fixing(inst);
    for (int h = 1; h <= fx.H; ++h) {
      CHECK(fx.H1[h - 1] >= inst.p);
      CHECK(fx.H1[h - 1] <= inst.n);
      CHECK(fx.H0[h - 1] >= inst.p);
      CHECK(fx.H0[h - 1] <= inst.n);
      if (h > 1) {
        // "cheaper than c_(h)" grows with h; "at least c_(h)" shrinks.
        CHECK(fx.H1[h - 1] >= fx.H1[h - 2]);
        CHECK(fx.H0[h - 1] <= fx.H0[h - 2]);
      }
    }
    // Every client pays at least the smallest positive value whenever all
    // off-diagonal costs are positive, so the h = 1 zero-side bound
    // saturates at n.
    CHECK(fx.H0[0] == inst.n);
    // The first p sorted positions are open facilities at cost zero:
    // always fixed to 0 across the whole ladder.
    for (int l = 1; l <= inst.p; ++l)
      for (int h = 1; h <= fx.H; ++h)
        CHECK(fx.state[l - 1][h - 1] == FixState::Fixed0);
  }
}

TEST_CASE("over budget: trivial bounds, flagged inexact") {
  Instance inst = generate_instance(10, 4, 9);
  FixingMatrix fx = compute_fixing(inst, 50);  // C(10,4) = 210 > 50
  CHECK_FALSE(fx.exact);
  CHECK(fx.H1 == std::vector<int>(fx.H, 10));
  CHECK(fx.H0 == std::vector<int>(fx.H, 10));
  CHECK(fx.fixed1_count() == 0);
  // Only the always-zero leading positions survive the fallback.
  CHECK(fx.fixed0_count() == inst.p * fx.H);
  for (int h = 1; h <= fx.H; ++h) {
    CHECK(fx.state[0][h - 1] == FixState::Fixed0);
    CHECK(fx.state[inst.p - 1][h - 1] == FixState::Fixed0);
    CHECK(fx.state[inst.p][h - 1] == FixState::NotFixed);
  }
}

TEST_CASE("applying the bounds tightens the covering counters") {
  Instance inst = load_instance_json(fixture("four_node.json"));
  FixingMatrix fx = compute_fixing(inst);
  BuildOptions opts;
  opts.sorting = SortingScheme::U;
  Model m = build_model(inst, opts);
  apply_fixing(m, fx);

  int zeroed = 0, raised = 0;
  for (int l = 1; l <= fx.n; ++l)
    for (int h = 1; h <= fx.H; ++h) {
      const ModelVar& v = m.vars[m.var(
          "u_" + std::to_string(l) + "_" + std::to_string(h))];
      FixState st = fx.state[l - 1][h - 1];
      if (st == FixState::Fixed0) {
        CHECK(v.ub == 0.0);
        ++zeroed;
      } else if (st == FixState::Fixed1) {
        CHECK(v.lb == 1.0);
        ++raised;
      } else {
        CHECK(v.lb == 0.0);
        CHECK(v.ub == 1.0);
      }
    }
  CHECK(zeroed == 11);
  CHECK(raised == 3);

  // The optimum embeds into the tightened model with zero violations.
  Solution best = solve_exact(inst).best;
  CHECK(check_point(m, lift_solution(m, inst, best)).empty());

  // Position-copy models carry no covering counters to tighten.
  BuildOptions xl;
  Model mx = build_model(inst, xl);
  CHECK_THROWS_WITH_AS(apply_fixing(mx, fx),
                       doctest::Contains("fixing target"), OmtError);
}
