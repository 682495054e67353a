// Benchmark of the parallel kernels against their serial references.
//
// Two kernels enumerate all C(n,p) facility subsets: the exact solver
// (nearest allocation + spanning tree per subset) and the position-bound
// fixing (rung histograms per subset).  Both partition the colex rank
// range over OpenMP workers; the serial twins walk the same range in one
// thread.  Results must match exactly — the benchmark checks that while
// timing both.
//
// Output: CSV with explicit header, one row per (kernel, n, p).

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>

#include "omt/instance.hpp"
#include "omt/oracle.hpp"
#include "omt/preprocessing.hpp"

using namespace omt;

namespace {

double time_of(const std::function<void()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  body();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

int main(int argc, char** argv) {
  const int repeats = argc > 1 ? std::atoi(argv[1]) : 3;
  std::printf("kernel,n,p,subsets,serial_s,parallel_s,speedup,match\n");

  const std::pair<int, int> solver_cases[] = {{14, 5}, {16, 6}, {18, 6},
                                              {20, 7}};
  for (auto [n, p] : solver_cases) {
    Instance inst = generate_instance(n, p, 7);
    OracleResult serial, parallel;
    double ts = 1e99, tp = 1e99;
    for (int r = 0; r < repeats; ++r) {
      ts = std::min(ts, time_of([&] { serial = solve_exact_serial(inst); }));
      tp = std::min(tp, time_of([&] { parallel = solve_exact(inst); }));
    }
    bool match = serial.objective == parallel.objective &&
                 serial.best.facilities == parallel.best.facilities;
    std::printf("solve_exact,%d,%d,%llu,%.4f,%.4f,%.2f,%s\n", n, p,
                static_cast<unsigned long long>(binomial(n, p)), ts, tp,
                ts / tp, match ? "yes" : "NO");
  }

  const std::pair<int, int> fixing_cases[] = {{12, 4}, {14, 5}, {16, 5}};
  for (auto [n, p] : fixing_cases) {
    Instance inst = generate_instance(n, p, 7);
    FixingMatrix serial, parallel;
    double ts = 1e99, tp = 1e99;
    for (int r = 0; r < repeats; ++r) {
      ts = std::min(ts,
                    time_of([&] { serial = compute_fixing_serial(inst); }));
      tp = std::min(tp, time_of([&] { parallel = compute_fixing(inst); }));
    }
    bool match = serial.H1 == parallel.H1 && serial.H0 == parallel.H0;
    std::printf("compute_fixing,%d,%d,%llu,%.4f,%.4f,%.2f,%s\n", n, p,
                static_cast<unsigned long long>(binomial(n, p)), ts, tp,
                ts / tp, match ? "yes" : "NO");
  }
  return 0;
}
