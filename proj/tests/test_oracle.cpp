// Exact-solver tests: subset enumeration machinery, known optima on the
// two reference instances, parallel/serial agreement, and determinism.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstdint>
#include <vector>

#include "omt/instance.hpp"
#include "omt/oracle.hpp"

using namespace omt;

namespace {

std::string fixture(const char* name) {
  return std::string(OMT_FIXTURE_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("binomial coefficients with saturation") {
  CHECK(binomial(10, 5) == 252);
  CHECK(binomial(10, 0) == 1);
  CHECK(binomial(10, 10) == 1);
  CHECK(binomial(4, 7) == 0);
  CHECK(binomial(52, 26) == 495918532948104ULL);
  // C(200,100) overflows 64 bits; the saturating value still exceeds any
  // practical budget instead of wrapping around.
  CHECK(binomial(200, 100) == INT64_MAX);
}

TEST_CASE("colex unranking inverts colex stepping") {
  const int n = 7, k = 3;
  std::vector<int> subset = {0, 1, 2};
  std::uint64_t rank = 0;
  do {
    CHECK(unrank_colex(rank, n, k) == subset);
    ++rank;
  } while (next_colex(subset, n));
  CHECK(rank == binomial(n, k));
  // Colex order sorts by largest element last: rank 1 flips the smallest.
  CHECK(unrank_colex(1, n, k) == std::vector<int>{0, 1, 3});
  CHECK(unrank_colex(binomial(n, k) - 1, n, k) == std::vector<int>{4, 5, 6});
}

TEST_CASE("nearest allocation: cheapest open facility, lowest-index ties") {
  Instance inst;
  inst.n = 4;
  inst.p = 2;
  inst.cost = {{0, 3, 5, 5}, {3, 0, 5, 5}, {5, 5, 0, 1}, {5, 5, 1, 0}};
  inst.lambda = {1, 1, 1, 1};
  inst.validate();
  // Client 0 and 1 see both facilities at cost 5: tie to facility 2.
  CHECK(nearest_allocation(inst, {2, 3}) == std::vector<int>{2, 2, 2, 3});
  CHECK_THROWS_AS(nearest_allocation(inst, {}), OmtError);

  Solution sol = subset_solution(inst, {2, 3});
  CHECK(sol.facilities == std::vector<int>{2, 3});
  CHECK(sol.tree_edges ==
        std::vector<std::pair<int, int>>{{2, 3}});
  CHECK_NOTHROW(sol.validate(inst));
}

TEST_CASE("four-node instance: optimum opens nodes 1 and 3 at value 2") {
  Instance inst = load_instance_json(fixture("four_node.json"));
  OracleResult r = solve_exact(inst);
  CHECK(r.best.facilities == std::vector<int>{0, 2});
  CHECK(r.objective == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("ten-node instance: published optima per criterion") {
  Instance inst = load_instance_json(fixture("ten_node.json"));

  SUBCASE("median") {
    OracleResult r = solve_exact(inst);
    CHECK(std::abs(r.objective - 18.3) <= 0.05);
    CHECK(r.best.facilities == std::vector<int>{2, 3, 4, 5, 6});
  }
  SUBCASE("k-centrum") {
    Instance kc = inst;
    kc.lambda = build_lambda(Criterion::KCentrum, 10);
    CHECK(std::abs(solve_exact(kc).objective - 26.0) <= 0.05);
  }
  SUBCASE("k-trimmed mean") {
    Instance kt = inst;
    kt.lambda = build_lambda(Criterion::KTrimmed, 10);
    CHECK(std::abs(solve_exact(kt).objective - 16.0) <= 0.05);
  }
}

TEST_CASE("parallel enumeration matches the serial reference") {
  for (unsigned long long seed = 1; seed <= 20; ++seed) {
    int n = 5 + static_cast<int>(seed % 4);
    int p = 2 + static_cast<int>(seed % 3);
    Instance inst = generate_instance(n, p, seed);
    OracleResult par = solve_exact(inst);
    OracleResult ser = solve_exact_serial(inst);
    CHECK(par.objective == doctest::Approx(ser.objective).epsilon(1e-12));
    CHECK(par.best.facilities == ser.best.facilities);
    CHECK(par.best.alloc == ser.best.alloc);
    CHECK(par.best.tree_edges == ser.best.tree_edges);
  }
}

TEST_CASE("subset budget is enforced") {
  Instance inst = generate_instance(10, 5, 1);
  CHECK_THROWS_WITH_AS(solve_exact(inst, 200),
                       doctest::Contains("subset budget"), OmtError);
  CHECK_NOTHROW(solve_exact(inst, 252));
}

TEST_CASE("ranked enumeration lists every subset and agrees with the best") {
  Instance inst = generate_instance(7, 3, 9);
  OracleResult r = solve_exact(inst, kDefaultSubsetBudget, true);
  REQUIRE(r.ranked.has_value());
  CHECK(r.ranked->size() == binomial(7, 3));
  double best = r.ranked->front().second;
  for (const auto& [subset, value] : *r.ranked) best = std::min(best, value);
  CHECK(best == doctest::Approx(r.objective).epsilon(1e-12));
  // Enumeration order is colex.
  CHECK(r.ranked->front().first == std::vector<int>{0, 1, 2});
  CHECK(r.ranked->back().first == std::vector<int>{4, 5, 6});
  // Plain calls do not pay for the ranking.
  CHECK_FALSE(solve_exact(inst).ranked.has_value());
}

TEST_CASE("opening every node leaves a pure tree problem") {
  Instance inst = generate_instance(6, 6, 13);
  OracleResult r = solve_exact(inst);
  CHECK(r.best.facilities == std::vector<int>{0, 1, 2, 3, 4, 5});
  for (int i = 0; i < 6; ++i) CHECK(r.best.alloc[i] == i);
}

TEST_CASE("repeated runs are byte-identical") {
  Instance inst = generate_instance(8, 3, 21);
  OracleResult a = solve_exact(inst);
  OracleResult b = solve_exact(inst);
  CHECK(a.objective == b.objective);
  CHECK(a.best.facilities == b.best.facilities);
  CHECK(a.best.alloc == b.best.alloc);
  CHECK(a.best.tree_edges == b.best.tree_edges);
}
