#include "omt/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "json.hpp"

namespace omt {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw OmtError("file not readable", path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw OmtError("file not writable", path);
  out << text;
}

}  // namespace

std::string criterion_name(Criterion c) {
  switch (c) {
    case Criterion::Median:
      return "median";
    case Criterion::KCentrum:
      return "k_centrum";
    case Criterion::KTrimmed:
      return "k_trimmed";
  }
  return "median";
}

std::optional<Criterion> parse_criterion(const std::string& name) {
  if (name == "median") return Criterion::Median;
  if (name == "k_centrum" || name == "k-centrum") return Criterion::KCentrum;
  if (name == "k_trimmed" || name == "k-trimmed") return Criterion::KTrimmed;
  return std::nullopt;
}

std::vector<double> build_lambda(Criterion criterion, int n) {
  if (n < 1) throw OmtError("lambda length", "n must be at least 1");
  std::vector<double> lambda(n, 1.0);
  switch (criterion) {
    case Criterion::Median:
      break;
    case Criterion::KCentrum: {
      // Only the n - floor(2n/3) largest allocation costs count.
      int zeros = 2 * n / 3;
      std::fill(lambda.begin(), lambda.begin() + zeros, 0.0);
      break;
    }
    case Criterion::KTrimmed: {
      // Both tails of the sorted cost vector are ignored.
      int tail = n / 3;
      std::fill(lambda.begin(), lambda.begin() + tail, 0.0);
      std::fill(lambda.end() - tail, lambda.end(), 0.0);
      break;
    }
  }
  return lambda;
}

double Instance::lambda_sum() const {
  return std::accumulate(lambda.begin(), lambda.end(), 0.0);
}

void Instance::validate() const {
  if (n < 2) throw OmtError("node count", "n must be at least 2");
  if (p < 2 || p > n)
    throw OmtError("facility count", "p must satisfy 2 <= p <= n");
  if (static_cast<int>(cost.size()) != n)
    throw OmtError("cost shape", "cost must be an n x n matrix");
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(cost[i].size()) != n)
      throw OmtError("cost shape", "cost must be an n x n matrix");
    if (cost[i][i] != 0.0)
      throw OmtError("cost diagonal", "self-service must cost zero");
    for (int j = 0; j < n; ++j) {
      if (cost[i][j] < 0.0)
        throw OmtError("cost sign", "costs must be nonnegative");
      if (cost[i][j] != cost[j][i])
        throw OmtError("cost symmetry", "cost matrix must be symmetric");
    }
  }
  if (static_cast<int>(lambda.size()) != n)
    throw OmtError("lambda length", "lambda must have n entries");
  for (double l : lambda)
    if (l < 0.0) throw OmtError("lambda sign", "weights must be nonnegative");
  if (lambda_sum() <= 0.0)
    throw OmtError("lambda sum", "weights must not all be zero");
}

void Solution::validate(const Instance& inst) const {
  inst.validate();
  const int n = inst.n;
  const int p = inst.p;
  if (static_cast<int>(facilities.size()) != p)
    throw OmtError("facility set size", "expected exactly p facilities");
  std::vector<char> open(n, 0);
  for (int f : facilities) {
    if (f < 0 || f >= n) throw OmtError("facility id", "id out of range");
    if (open[f]) throw OmtError("facility set", "duplicate facility id");
    open[f] = 1;
  }
  if (static_cast<int>(alloc.size()) != n)
    throw OmtError("allocation size", "every node needs an allocation");
  for (int i = 0; i < n; ++i) {
    if (alloc[i] < 0 || alloc[i] >= n || !open[alloc[i]])
      throw OmtError("allocation target", "nodes must go to open facilities");
    if (open[i] && alloc[i] != i)
      throw OmtError("self service", "facilities must serve themselves");
  }
  if (static_cast<int>(tree_edges.size()) != p - 1)
    throw OmtError("tree size", "tree must have exactly p-1 edges");
  // Union-find over facilities proves the edges form a spanning tree:
  // p-1 edges with no cycle connect all p facilities.
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (auto [i, j] : tree_edges) {
    if (i < 0 || j < 0 || i >= n || j >= n || !open[i] || !open[j] || i == j)
      throw OmtError("tree edge", "edges must join two distinct facilities");
    int ri = find(i), rj = find(j);
    if (ri == rj) throw OmtError("tree cycle", "tree edges must be acyclic");
    parent[ri] = rj;
  }
}

double evaluate_objective(const Instance& inst, const Solution& sol) {
  sol.validate(inst);
  std::vector<double> d(inst.n);
  for (int i = 0; i < inst.n; ++i) d[i] = inst.cost[i][sol.alloc[i]];
  std::sort(d.begin(), d.end());
  double ordered = 0.0;
  for (int l = 0; l < inst.n; ++l) ordered += inst.lambda[l] * d[l];
  ordered /= inst.lambda_sum();
  double tree = 0.0;
  for (auto [i, j] : sol.tree_edges) tree += inst.cost[i][j];
  // p = 1 never reaches here (validate requires p >= 2); the averaged tree
  // term is tree / (p-1).
  return ordered + tree / (inst.p - 1);
}

GapMetrics gap_metrics(double objU, double objL, double objU_best, double objR,
                       double objL_best) {
  if (objU <= 0.0 || objU_best <= 0.0)
    throw OmtError("gap denominator", "upper bounds must be positive");
  GapMetrics g;
  g.gUL = 100.0 * (objU - objL) / objU;
  g.gUR = 100.0 * (objU_best - objR) / objU_best;
  g.gULbar = 100.0 * (objU - objL_best) / objU;
  g.gUL_term = 100.0 * (objU_best - objL) / objU_best;
  return g;
}

Instance generate_instance(int n, int p, unsigned long long rng_seed,
                           Criterion criterion, long cost_lo, long cost_hi) {
  if (n < 2) throw OmtError("node count", "n must be at least 2");
  if (p < 2 || p > n)
    throw OmtError("facility count", "p must satisfy 2 <= p <= n");
  if (cost_lo < 0 || cost_hi < cost_lo)
    throw OmtError("cost range", "need 0 <= lo <= hi");
  Instance inst;
  inst.n = n;
  inst.p = p;
  inst.cost.assign(n, std::vector<double>(n, 0.0));
  std::mt19937_64 rng(rng_seed);
  std::uniform_int_distribution<long> dist(cost_lo, cost_hi);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      inst.cost[i][j] = inst.cost[j][i] = static_cast<double>(dist(rng));
  inst.lambda = build_lambda(criterion, n);
  inst.criterion = criterion_name(criterion);
  inst.seed = static_cast<long long>(rng_seed);
  inst.validate();
  return inst;
}

Instance parse_instance_json(const std::string& text) {
  json j = json::parse(text);
  Instance inst;
  inst.n = j.at("n").get<int>();
  inst.p = j.at("p").get<int>();
  inst.cost = j.at("cost").get<CostMatrix>();
  inst.lambda = j.at("lambda").get<std::vector<double>>();
  if (j.contains("criterion")) inst.criterion = j["criterion"].get<std::string>();
  if (j.contains("seed")) inst.seed = j["seed"].get<long long>();
  inst.validate();
  return inst;
}

Instance load_instance_json(const std::string& path) {
  return parse_instance_json(read_file(path));
}

std::string instance_to_json(const Instance& inst) {
  json j;
  j["n"] = inst.n;
  j["p"] = inst.p;
  j["cost"] = inst.cost;
  j["lambda"] = inst.lambda;
  if (!inst.criterion.empty()) j["criterion"] = inst.criterion;
  if (inst.seed) j["seed"] = *inst.seed;
  return j.dump(2) + "\n";
}

void save_instance_json(const Instance& inst, const std::string& path) {
  write_file(path, instance_to_json(inst));
}

Solution parse_solution_json(const std::string& text, int n) {
  json j = json::parse(text);
  Solution sol;
  for (int f : j.at("facilities").get<std::vector<int>>())
    sol.facilities.push_back(f - 1);
  std::sort(sol.facilities.begin(), sol.facilities.end());
  for (int a : j.at("allocation").get<std::vector<int>>())
    sol.alloc.push_back(a - 1);
  if (static_cast<int>(sol.alloc.size()) != n)
    throw OmtError("allocation size", "every node needs an allocation");
  for (auto& e : j.at("tree_edges").get<std::vector<std::vector<int>>>()) {
    if (e.size() != 2) throw OmtError("tree edge", "edges are pairs");
    int a = e[0] - 1, b = e[1] - 1;
    sol.tree_edges.emplace_back(std::min(a, b), std::max(a, b));
  }
  return sol;
}

Solution load_solution_json(const std::string& path, int n) {
  return parse_solution_json(read_file(path), n);
}

std::string solution_to_json(const Solution& sol, double objective) {
  json j;
  std::vector<int> fac;
  for (int f : sol.facilities) fac.push_back(f + 1);
  j["facilities"] = fac;
  std::vector<int> alloc;
  for (int a : sol.alloc) alloc.push_back(a + 1);
  j["allocation"] = alloc;
  std::vector<std::vector<int>> edges;
  for (auto [a, b] : sol.tree_edges) edges.push_back({a + 1, b + 1});
  j["tree_edges"] = edges;
  j["objective"] = objective;
  return j.dump(2) + "\n";
}

void save_solution_json(const Solution& sol, double objective,
                        const std::string& path) {
  write_file(path, solution_to_json(sol, objective));
}

}  // namespace omt
