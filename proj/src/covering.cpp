#include "omt/covering.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace omt {

namespace {

// Dedup comparison for ladder values: exact for integers, 1e-9 relative
// otherwise.
bool same_value(double a, double b) {
  if (a == b) return true;
  double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= 1e-9 * scale;
}

// Cells grouped by rung (0 = zero cells), each group in row-major order.
std::vector<std::vector<std::pair<int, int>>> cells_by_rung(
    const CostMatrix& cost, const CostLadder& ladder) {
  const int n = static_cast<int>(cost.size());
  std::vector<std::vector<std::pair<int, int>>> groups(ladder.H_size + 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      groups[ladder.rung_of(cost[i][j])].emplace_back(i, j);
  return groups;
}

}  // namespace

int CostLadder::rung_of(double v) const {
  if (same_value(v, 0.0)) return 0;
  auto it = std::lower_bound(values.begin(), values.end(), v);
  if (it != values.end() && same_value(*it, v))
    return static_cast<int>(it - values.begin()) + 1;
  if (it != values.begin() && same_value(*(it - 1), v))
    return static_cast<int>(it - values.begin());
  throw OmtError("ladder value", "cost is not on the ladder");
}

CostLadder build_cost_ladder(const CostMatrix& cost) {
  const int n = static_cast<int>(cost.size());
  CostLadder ladder;
  ladder.n = n;
  std::vector<double> vals;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!same_value(cost[i][j], 0.0)) vals.push_back(cost[i][j]);
  std::sort(vals.begin(), vals.end());
  for (double v : vals)
    if (ladder.values.empty() || !same_value(ladder.values.back(), v))
      ladder.values.push_back(v);
  ladder.H_size = static_cast<int>(ladder.values.size());

  // Tie bookkeeping over the strict upper triangle.
  ladder.multiplicities.assign(ladder.H_size, 0);
  int upper_distinct = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (same_value(cost[i][j], 0.0)) {
        ladder.chi0_hat = 1;
        continue;
      }
      int h = ladder.rung_of(cost[i][j]);
      if (ladder.multiplicities[h - 1]++ == 0) ++upper_distinct;
    }
  ladder.alpha_hat = n * (n - 1) / 2 - ladder.chi0_hat - upper_distinct;
  return ladder;
}

CoveringAssignment map_f(const SortedAssignment& sa, const CostMatrix& cost,
                         const CostLadder& ladder) {
  const int n = static_cast<int>(cost.size());
  CoveringAssignment ca;
  ca.x = sa.x;
  ca.z = sa.z;
  ca.u.assign(n, std::vector<double>(ladder.H_size, 0.0));
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        int rung = ladder.rung_of(cost[i][j]);
        // The cell contributes to every threshold below its own cost.
        for (int h = 1; h <= rung; ++h) ca.u[l][h - 1] += sa.xl[l][i][j];
      }
  return ca;
}

SortedAssignment map_g(const CoveringAssignment& ca, const CostMatrix& cost,
                       const CostLadder& ladder) {
  const int n = static_cast<int>(cost.size());
  const int H = ladder.H_size;
  for (int l = 0; l < n; ++l)
    for (int h = 0; h + 1 < H; ++h)
      if (ca.u[l][h] < ca.u[l][h + 1] - 1e-9)
        throw OmtError("covering monotonicity",
                       "u must be nonincreasing along the ladder");

  // Rung budget of rank l at rung h: u_lh - u_{l,h+1}, with u_l0 := 1 and
  // u_{l,H+1} := 0.
  auto budget = [&](int l, int h) {
    double lo = (h == 0) ? 1.0 : ca.u[l][h - 1];
    double hi = (h == H) ? 0.0 : ca.u[l][h];
    return lo - hi;
  };
  // l(h): first rank with positive budget at rung h; ranks below it carry
  // nothing at that rung.
  std::vector<int> first_rank(H + 1, n);  // n plays the +infinity sentinel
  for (int h = 0; h <= H; ++h)
    for (int l = 0; l < n; ++l)
      if (budget(l, h) > 1e-12) {
        first_rank[h] = l;
        break;
      }

  auto groups = cells_by_rung(cost, ladder);
  SortedAssignment sa;
  sa.x = ca.x;
  sa.z = ca.z;
  sa.xl.assign(n, std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0)));
  // assigned[i][j]: mass already given to cell (i,j) across earlier ranks.
  std::vector<std::vector<double>> assigned(n, std::vector<double>(n, 0.0));
  for (int l = 0; l < n; ++l)
    for (int h = 0; h <= H; ++h) {
      if (l < first_rank[h]) continue;
      double remaining = budget(l, h);
      for (auto [i, j] : groups[h]) {
        if (ca.x[i][j] <= 0.0) continue;
        double capacity = ca.x[i][j] - assigned[i][j];
        double take = std::min(capacity, remaining);
        if (take <= 1e-12) continue;
        sa.xl[l][i][j] = take;
        assigned[i][j] += take;
        remaining -= take;
      }
    }
  return sa;
}

SortedAssignment map_f_inverse_noties(const CoveringAssignment& ca,
                                      const CostMatrix& cost,
                                      const CostLadder& ladder) {
  const int n = static_cast<int>(cost.size());
  const int H = ladder.H_size;
  auto groups = cells_by_rung(cost, ladder);
  for (const auto& g : groups)
    if (g.size() > 1)
      throw OmtError("cost ties",
                     "the telescoping inverse needs one cell per value");
  for (int l = 0; l < n; ++l)
    for (int h = 0; h + 1 < H; ++h)
      if (ca.u[l][h] < ca.u[l][h + 1] - 1e-9)
        throw OmtError("covering monotonicity",
                       "u must be nonincreasing along the ladder");

  SortedAssignment sa;
  sa.x = ca.x;
  sa.z = ca.z;
  sa.xl.assign(n, std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0)));
  for (int l = 0; l < n; ++l)
    for (int h = 0; h <= H; ++h) {
      if (groups[h].empty()) continue;
      auto [i, j] = groups[h].front();
      double lo = (h == 0) ? 1.0 : ca.u[l][h - 1];
      double hi = (h == H) ? 0.0 : ca.u[l][h];
      sa.xl[l][i][j] = lo - hi;
    }
  return sa;
}

std::vector<StaircaseViolation> check_staircase(const SortedAssignment& sa,
                                               const CostMatrix& cost,
                                               const CostLadder& ladder) {
  const int n = static_cast<int>(cost.size());
  std::vector<StaircaseViolation> out;
  for (int h = 1; h <= ladder.H_size; ++h)
    for (int l = 0; l + 1 < n; ++l) {
      double lhs = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          if (ladder.rung_of(cost[i][j]) >= h)
            lhs += sa.xl[l][i][j];
          else
            lhs += sa.xl[l + 1][i][j];
        }
      if (lhs > 1.0 + 1e-9) out.push_back({l, h, lhs});
    }
  return out;
}

double ordered_cost_xl(const std::vector<std::vector<std::vector<double>>>& xl,
                       const CostMatrix& cost,
                       const std::vector<double>& lambda) {
  const int n = static_cast<int>(cost.size());
  double total = 0.0;
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) total += lambda[l] * cost[i][j] * xl[l][i][j];
  return total;
}

double ordered_cost_u(const std::vector<std::vector<double>>& u,
                      const CostLadder& ladder,
                      const std::vector<double>& lambda) {
  double total = 0.0;
  for (size_t l = 0; l < u.size(); ++l)
    for (int h = 1; h <= ladder.H_size; ++h) {
      double step = ladder.values[h - 1] - (h == 1 ? 0.0 : ladder.values[h - 2]);
      total += lambda[l] * step * u[l][h - 1];
    }
  return total;
}

std::vector<std::vector<double>> u_from_sorted_costs(
    const std::vector<double>& sorted_costs, const CostLadder& ladder) {
  std::vector<std::vector<double>> u(
      sorted_costs.size(), std::vector<double>(ladder.H_size, 0.0));
  for (size_t l = 0; l < sorted_costs.size(); ++l)
    for (int h = 1; h <= ladder.H_size; ++h)
      if (sorted_costs[l] >= ladder.values[h - 1] - 1e-12) u[l][h - 1] = 1.0;
  return u;
}

std::optional<std::pair<int, int>> first_rank_monotonicity_violation(
    const std::vector<std::vector<double>>& u) {
  for (size_t l = 0; l + 1 < u.size(); ++l)
    for (size_t h = 0; h < u[l].size(); ++h)
      if (u[l][h] > u[l + 1][h] + 1e-9)
        return std::make_pair(static_cast<int>(l), static_cast<int>(h) + 1);
  return std::nullopt;
}

}  // namespace omt
