// Command-line front end for the ordered median tree location toolkit.
//
//   gen        write a random instance as JSON
//   eval       evaluate a solution file against an instance
//   solve      exact, heuristic or decomposition solve; writes solution
//              JSON and optionally a result-table CSV row
//   export     build a chosen model and write it in LP text format
//   preprocess print the cost ladder, the worst-case position bounds and
//              the induced fixing matrix
//   verify     embed a solution into a chosen model and check every row,
//              bound and integrality requirement
//   bench      seeded batch producing the result-table CSV plus
//              per-(|V|,p) group means
//
// Exit codes: 0 ok, 1 infeasible input / failed verification / runtime
// failure, 2 usage error.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "omt/benders.hpp"
#include "omt/covering.hpp"
#include "omt/formulations.hpp"
#include "omt/heuristics.hpp"
#include "omt/instance.hpp"
#include "omt/model.hpp"
#include "omt/oracle.hpp"
#include "omt/preprocessing.hpp"
#include "omt/simplex.hpp"

namespace {

using namespace omt;

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw OmtError("file open", path);
  out << text;
  if (!out) throw OmtError("file write", path);
}

// One row of the result table.  Gaps are derived from the objective
// columns on the spot, so every printed row is self-consistent:
// objU_best = objU and objL_best = objL for single-run records.
struct RunRecord {
  int n = 0, p = 0;
  long long ins = 0;
  double cpu = 0, objU = 0, objL = 0, objR = 0;
  std::uint64_t nod = 0;
};

const char* kRecordHeader = "|V|,p,ins,cpu,objU,objL,objR,gUR,gUL,gULbar,gUL_term,nod";

GapMetrics record_gaps(const RunRecord& r) {
  if (r.objU <= 0) return {};
  return gap_metrics(r.objU, r.objL, r.objU, r.objR, r.objL);
}

void write_record_row(std::ostream& out, const RunRecord& r) {
  GapMetrics g = record_gaps(r);
  out << r.n << ',' << r.p << ',' << r.ins << ',' << fmt("%.3f", r.cpu)
      << ',' << fmt("%.10g", r.objU) << ',' << fmt("%.10g", r.objL) << ','
      << fmt("%.10g", r.objR) << ',' << fmt("%.1f", g.gUR) << ','
      << fmt("%.1f", g.gUL) << ',' << fmt("%.1f", g.gULbar) << ','
      << fmt("%.1f", g.gUL_term) << ',' << r.nod << '\n';
}

void append_record(const std::string& path, const RunRecord& r) {
  bool need_header = true;
  {
    std::ifstream probe(path);
    std::string first;
    if (probe && std::getline(probe, first) && !first.empty())
      need_header = false;
  }
  std::ofstream out(path, std::ios::app);
  if (!out) throw OmtError("file open", path);
  if (need_header) out << kRecordHeader << '\n';
  write_record_row(out, r);
}

// Lower bound from the continuous relaxation of the covering model with
// the placeholder tree rows only (no realization, no helper chain).
// Beyond the simplex size envelope the trivial bound 0 is returned.
double relaxation_bound(const Instance& inst) {
  BuildOptions opts;
  opts.family = Family::F1;
  opts.sorting = SortingScheme::U;
  opts.tree = TreeScheme::SUB;
  opts.redundant_chain = false;
  try {
    Model m = build_model(inst, opts);
    if (m.vars.size() > 2000 || m.rows.size() > 6000) return 0.0;
    LpResult res = solve_lp(m.to_lp());
    return res.status == LpStatus::Optimal ? std::max(0.0, res.objective)
                                           : 0.0;
  } catch (const OmtError&) {
    return 0.0;
  }
}

BuildOptions options_from_flags(const std::string& family,
                                const std::string& sorting,
                                const std::string& tree, bool staircase,
                                bool no_chain, bool split, bool master) {
  BuildOptions opts;
  opts.family = parse_family(family);
  opts.sorting = parse_sorting(sorting);
  opts.tree = parse_tree(tree);
  opts.staircase = staircase;
  opts.redundant_chain = !no_chain;
  opts.split_assign_open = split;
  opts.with_mu = master;
  return opts;
}

// ---------------------------------------------------------------- gen --
struct GenArgs {
  int n = 10, p = 2;
  long long seed = 1;
  std::string criterion = "median";
  long lo = 1, hi = 100000;
  std::string out = "instance.json";
};

int run_gen(const GenArgs& a) {
  auto crit = parse_criterion(a.criterion);
  if (!crit) throw OmtError("criterion name", a.criterion);
  Instance inst = generate_instance(a.n, a.p, a.seed, *crit, a.lo, a.hi);
  save_instance_json(inst, a.out);
  std::cout << "wrote " << a.out << " (n=" << inst.n << " p=" << inst.p
            << " criterion=" << inst.criterion << " seed=" << a.seed
            << ")\n";
  return 0;
}

// --------------------------------------------------------------- eval --
struct EvalArgs {
  std::string instance, solution;
};

int run_eval(const EvalArgs& a) {
  Instance inst = load_instance_json(a.instance);
  Solution sol = load_solution_json(a.solution, inst.n);
  double obj = evaluate_objective(inst, sol);
  std::cout << "objective: " << fmt("%.10g", obj) << '\n';
  return 0;
}

// -------------------------------------------------------------- solve --
struct SolveArgs {
  std::string instance;
  std::string method = "oracle";
  std::string variant = "domp-mst";
  std::string cut = "dual";
  std::string out = "solution.json";
  std::string record;
  std::string trace;
  double max_time = std::numeric_limits<double>::infinity();
  double max_gap = 1e-9;
};

int run_solve(const SolveArgs& a) {
  Instance inst = load_instance_json(a.instance);
  auto t0 = std::chrono::steady_clock::now();
  RunRecord rec;
  rec.n = inst.n;
  rec.p = inst.p;
  rec.ins = inst.seed.value_or(0);
  Solution sol;
  if (a.method == "oracle") {
    OracleResult r = solve_exact(inst);
    sol = r.best;
    rec.objU = rec.objL = r.objective;
    rec.nod = binomial(inst.n, inst.p);
    rec.objR = relaxation_bound(inst);
  } else if (a.method == "heuristic") {
    HeuristicResult r = a.variant == "pmedt-domp"
                            ? heuristic_pmedt_domp(inst)
                            : heuristic_domp_mst(inst);
    sol = r.solution;
    rec.objU = r.objective;
    rec.objR = relaxation_bound(inst);
    rec.objL = rec.objR;  // only the relaxation bounds a heuristic run
    rec.nod = r.trace.size();
  } else {  // benders
    BendersOptions opts;
    opts.cut = a.cut == "classical" ? CutKind::Classical : CutKind::Dual;
    opts.max_time = a.max_time;
    opts.max_gap = a.max_gap;
    BendersResult r = benders_solve(inst, opts);
    if (!std::isfinite(r.objective))
      throw OmtError("decomposition", "no feasible solution found in time");
    sol = r.best;
    rec.objU = r.upper_bound;
    rec.objL = r.lower_bound;
    rec.objR = relaxation_bound(inst);
    rec.nod = r.iterations;
    if (!a.trace.empty()) {
      std::ofstream out(a.trace, std::ios::binary);
      if (!out) throw OmtError("file open", a.trace);
      write_bound_trace(out, r);
    }
  }
  rec.cpu = seconds_since(t0);
  save_solution_json(sol, rec.objU, a.out);
  std::cout << "method: " << a.method << '\n'
            << "objective: " << fmt("%.10g", rec.objU) << '\n'
            << "lower bound: " << fmt("%.10g", rec.objL) << '\n'
            << "facilities:";
  for (int f : sol.facilities) std::cout << ' ' << f + 1;
  std::cout << '\n'
            << "cpu: " << fmt("%.3f", rec.cpu) << " s\n"
            << "wrote " << a.out << '\n';
  if (!a.record.empty()) append_record(a.record, rec);
  return 0;
}

// ------------------------------------------------------------- export --
struct ExportArgs {
  std::string instance;
  std::string family = "F1";
  std::string sorting = "u";
  std::string tree = "sub";
  bool staircase = false, no_chain = false, split = false, master = false;
  bool apply_fix = false;
  std::string out = "model.lp";
};

int run_export(const ExportArgs& a) {
  Instance inst = load_instance_json(a.instance);
  BuildOptions opts = options_from_flags(a.family, a.sorting, a.tree,
                                         a.staircase, a.no_chain, a.split,
                                         a.master);
  Model m = build_model(inst, opts);
  if (a.apply_fix) apply_fixing(m, compute_fixing(inst));
  write_text_file(a.out, export_lp(m));
  CostLadder ladder;
  int H = 1;
  if (opts.sorting == SortingScheme::U) {
    ladder = build_cost_ladder(inst.cost);
    H = ladder.H_size;
  }
  SizePrediction sp = predicted_size(opts.family, opts.sorting, inst.n, H);
  std::cout << "model: " << m.name << '\n'
            << "variables: " << m.vars.size() << " (structural "
            << m.structural_var_count() << ", predicted " << sp.variables
            << ")\n"
            << "rows: " << m.rows.size() << " (core " << m.core_row_count()
            << ", predicted " << sp.constraints << ")\n"
            << "wrote " << a.out << '\n';
  return 0;
}

// --------------------------------------------------------- preprocess --
struct PreprocessArgs {
  std::string instance;
  std::string json_out;
};

int run_preprocess(const PreprocessArgs& a) {
  Instance inst = load_instance_json(a.instance);
  CostLadder ladder = build_cost_ladder(inst.cost);
  FixingMatrix fx = compute_fixing(inst);
  std::cout << "ladder (H=" << ladder.H_size << "):";
  for (double v : ladder.values) std::cout << ' ' << fmt("%.10g", v);
  std::cout << '\n';
  if (!fx.exact)
    std::cout << "note: subset budget exceeded; trivial bounds reported\n";
  std::cout << "  h |  H1 | n-H1 |  H0 | n-H0+p\n";
  for (int h = 1; h <= fx.H; ++h) {
    std::printf("%3d | %3d | %4d | %3d | %6d\n", h, fx.H1[h - 1],
                inst.n - fx.H1[h - 1], fx.H0[h - 1],
                inst.n - fx.H0[h - 1] + inst.p);
  }
  std::cout << "fixing matrix (rows: sorted positions 1..n, columns: "
               "ladder ranks 1..H; 0/1 fixed, . free):\n";
  for (int l = 1; l <= fx.n; ++l) {
    std::cout << "  l=" << l << ':';
    for (int h = 1; h <= fx.H; ++h) {
      FixState s = fx.state[l - 1][h - 1];
      std::cout << ' '
                << (s == FixState::Fixed0 ? '0'
                                          : s == FixState::Fixed1 ? '1' : '.');
    }
    std::cout << '\n';
  }
  std::cout << "fixed to zero: " << fx.fixed0_count()
            << ", fixed to one: " << fx.fixed1_count() << " of "
            << fx.n * fx.H << " counters\n";
  if (!a.json_out.empty()) {
    std::ostringstream js;
    js << "{\n  \"H1\": [";
    for (int h = 0; h < fx.H; ++h) js << (h ? "," : "") << fx.H1[h];
    js << "],\n  \"H0\": [";
    for (int h = 0; h < fx.H; ++h) js << (h ? "," : "") << fx.H0[h];
    js << "],\n  \"exact\": " << (fx.exact ? "true" : "false")
       << ",\n  \"fixing\": [";
    for (int l = 0; l < fx.n; ++l) {
      js << (l ? ", " : "") << '"';
      for (int h = 0; h < fx.H; ++h) {
        FixState s = fx.state[l][h];
        js << (s == FixState::Fixed0 ? '0'
                                     : s == FixState::Fixed1 ? '1' : '.');
      }
      js << '"';
    }
    js << "]\n}\n";
    write_text_file(a.json_out, js.str());
    std::cout << "wrote " << a.json_out << '\n';
  }
  return 0;
}

// ------------------------------------------------------------- verify --
struct VerifyArgs {
  std::string instance, solution;
  std::string family = "F1";
  std::string sorting = "u";
  std::string tree = "sub";
  bool staircase = false, no_chain = false, split = false, master = false;
};

int run_verify(const VerifyArgs& a) {
  Instance inst = load_instance_json(a.instance);
  Solution sol = load_solution_json(a.solution, inst.n);
  BuildOptions opts = options_from_flags(a.family, a.sorting, a.tree,
                                         a.staircase, a.no_chain, a.split,
                                         a.master);
  Model m = build_model(inst, opts);
  std::vector<double> point = lift_solution(m, inst, sol);
  std::vector<PointViolation> bad = check_point(m, point);
  double direct = evaluate_objective(inst, sol);
  double lifted = objective_value(m, point);
  // The master model prices the tree through the surrogate, which the
  // embedding sets to the exact tree average, so both views must agree.
  bool obj_ok = std::abs(direct - lifted) <=
                kObjTol * std::max(1.0, std::abs(direct));
  std::cout << "model: " << m.name << '\n'
            << "objective (combinatorial): " << fmt("%.10g", direct) << '\n'
            << "objective (embedded):      " << fmt("%.10g", lifted) << '\n';
  for (const PointViolation& v : bad)
    std::cout << "violation: " << v.where << " by "
              << fmt("%.3g", v.amount) << '\n';
  if (!bad.empty() || !obj_ok) {
    std::cout << "verification FAILED ("
              << (bad.empty() ? "objective mismatch"
                              : std::to_string(bad.size()) + " violations")
              << ")\n";
    return 1;
  }
  std::cout << "verification passed: every row, bound and integrality "
               "requirement holds\n";
  return 0;
}

// -------------------------------------------------------------- bench --
struct BenchArgs {
  std::vector<int> sizes{10};
  std::vector<int> pvals{5};
  int instances = 3;
  std::string criterion = "median";
  std::string method = "heuristic";
  std::string variant = "domp-mst";
  std::string cut = "dual";
  std::string out;
};

int run_bench(const BenchArgs& a) {
  auto crit = parse_criterion(a.criterion);
  if (!crit) throw OmtError("criterion name", a.criterion);
  std::vector<RunRecord> rows;
  for (int n : a.sizes)
    for (int p : a.pvals) {
      if (p < 2 || p > n) continue;
      for (int ins = 1; ins <= a.instances; ++ins) {
        Instance inst = generate_instance(n, p, ins, *crit);
        auto t0 = std::chrono::steady_clock::now();
        RunRecord rec;
        rec.n = n;
        rec.p = p;
        rec.ins = ins;
        if (a.method == "oracle") {
          OracleResult r = solve_exact(inst);
          rec.objU = rec.objL = r.objective;
          rec.nod = binomial(n, p);
        } else if (a.method == "heuristic") {
          HeuristicResult r = a.variant == "pmedt-domp"
                                  ? heuristic_pmedt_domp(inst)
                                  : heuristic_domp_mst(inst);
          rec.objU = r.objective;
          rec.nod = r.trace.size();
        } else {
          BendersOptions opts;
          opts.cut =
              a.cut == "classical" ? CutKind::Classical : CutKind::Dual;
          BendersResult r = benders_solve(inst, opts);
          rec.objU = r.upper_bound;
          rec.objL = r.lower_bound;
          rec.nod = r.iterations;
        }
        rec.objR = relaxation_bound(inst);
        if (a.method == "heuristic") rec.objL = rec.objR;
        rec.cpu = seconds_since(t0);
        rows.push_back(rec);
      }
    }
  std::sort(rows.begin(), rows.end(), [](const RunRecord& x,
                                         const RunRecord& y) {
    return std::tie(x.n, x.p, x.ins) < std::tie(y.n, y.p, y.ins);
  });
  std::ostringstream table;
  table << kRecordHeader << '\n';
  for (const RunRecord& r : rows) write_record_row(table, r);
  if (!a.out.empty()) {
    write_text_file(a.out, table.str());
    std::cout << "wrote " << a.out << " (" << rows.size() << " rows)\n";
  } else {
    std::cout << table.str() << '\n';
  }
  // Group means in the summary-table layout.
  std::map<std::pair<int, int>, std::vector<const RunRecord*>> groups;
  for (const RunRecord& r : rows) groups[{r.n, r.p}].push_back(&r);
  std::cout << "|V|,p,#,cpu,gUR,gUL,gULbar,gUL_term,nod\n";
  for (const auto& [key, members] : groups) {
    double cpu = 0, gUR = 0, gUL = 0, gULbar = 0, gUL_term = 0, nod = 0;
    for (const RunRecord* r : members) {
      GapMetrics g = record_gaps(*r);
      cpu += r->cpu;
      gUR += g.gUR;
      gUL += g.gUL;
      gULbar += g.gULbar;
      gUL_term += g.gUL_term;
      nod += static_cast<double>(r->nod);
    }
    double k = static_cast<double>(members.size());
    std::cout << key.first << ',' << key.second << ',' << members.size()
              << ',' << fmt("%.3f", cpu / k) << ',' << fmt("%.1f", gUR / k)
              << ',' << fmt("%.1f", gUL / k) << ',' << fmt("%.1f", gULbar / k)
              << ',' << fmt("%.1f", gUL_term / k) << ','
              << fmt("%.1f", nod / k) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ordered median tree location toolkit"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* cgen = app.add_subcommand("gen", "write a random instance as JSON");
  cgen->add_option("--n", gen.n, "node count")->required();
  cgen->add_option("--p", gen.p, "facilities to open")->required();
  cgen->add_option("--seed", gen.seed, "generator seed");
  cgen->add_option("--criterion", gen.criterion,
                   "median | k_centrum | k_trimmed");
  cgen->add_option("--lo", gen.lo, "smallest cost");
  cgen->add_option("--hi", gen.hi, "largest cost");
  cgen->add_option("-o,--out", gen.out, "output path");

  EvalArgs eval;
  auto* ceval = app.add_subcommand("eval", "evaluate a solution file");
  ceval->add_option("--instance", eval.instance)->required();
  ceval->add_option("--solution", eval.solution)->required();

  SolveArgs solve;
  auto* csolve = app.add_subcommand("solve", "solve an instance");
  csolve->add_option("--instance", solve.instance)->required();
  csolve->add_option("--method", solve.method)
      ->check(CLI::IsMember({"oracle", "heuristic", "benders"}));
  csolve->add_option("--variant", solve.variant)
      ->check(CLI::IsMember({"domp-mst", "pmedt-domp"}));
  csolve->add_option("--cut", solve.cut)
      ->check(CLI::IsMember({"classical", "dual"}));
  csolve->add_option("-o,--out", solve.out, "solution JSON path");
  csolve->add_option("--record", solve.record, "append a CSV row here");
  csolve->add_option("--trace", solve.trace,
                     "bound-trace CSV (benders only)");
  csolve->add_option("--time", solve.max_time, "time limit in seconds");
  csolve->add_option("--gap", solve.max_gap, "relative gap target");

  ExportArgs exp;
  auto* cexp = app.add_subcommand("export", "write a model as LP text");
  cexp->add_option("--instance", exp.instance)->required();
  cexp->add_option("--family", exp.family)
      ->check(CLI::IsMember({"F1", "F2", "f1", "f2"}));
  cexp->add_option("--sorting", exp.sorting)
      ->check(CLI::IsMember({"xl", "u", "XL", "U"}));
  cexp->add_option("--tree", exp.tree)
      ->check(CLI::IsMember({"sub", "mtz", "flow1", "flow2", "km"}));
  cexp->add_flag("--staircase", exp.staircase,
                 "staircase ordering rows (xl only)");
  cexp->add_flag("--no-chain", exp.no_chain, "omit helper chain rows (u)");
  cexp->add_flag("--split", exp.split, "split open-allocation rows (F2)");
  cexp->add_flag("--master", exp.master,
                 "decomposition master with surrogate mu");
  cexp->add_flag("--apply-fixing", exp.apply_fix,
                 "tighten counter bounds by preprocessing (u)");
  cexp->add_option("-o,--out", exp.out, "output path");

  PreprocessArgs prep;
  auto* cprep =
      app.add_subcommand("preprocess", "position-bound fixing tables");
  cprep->add_option("--instance", prep.instance)->required();
  cprep->add_option("--json", prep.json_out, "also write tables as JSON");

  VerifyArgs verify;
  auto* cver =
      app.add_subcommand("verify", "embed a solution and check a model");
  cver->add_option("--instance", verify.instance)->required();
  cver->add_option("--solution", verify.solution)->required();
  cver->add_option("--family", verify.family)
      ->check(CLI::IsMember({"F1", "F2", "f1", "f2"}));
  cver->add_option("--sorting", verify.sorting)
      ->check(CLI::IsMember({"xl", "u", "XL", "U"}));
  cver->add_option("--tree", verify.tree)
      ->check(CLI::IsMember({"sub", "mtz", "flow1", "flow2", "km"}));
  cver->add_flag("--staircase", verify.staircase);
  cver->add_flag("--no-chain", verify.no_chain);
  cver->add_flag("--split", verify.split);
  cver->add_flag("--master", verify.master);

  BenchArgs bench;
  auto* cbench = app.add_subcommand("bench", "seeded benchmark batch");
  cbench->add_option("--sizes", bench.sizes, "node counts")->delimiter(',');
  cbench->add_option("--pvals", bench.pvals, "facility counts")
      ->delimiter(',');
  cbench->add_option("--instances", bench.instances, "seeds 1..k per cell");
  cbench->add_option("--criterion", bench.criterion,
                     "median | k_centrum | k_trimmed");
  cbench->add_option("--method", bench.method)
      ->check(CLI::IsMember({"oracle", "heuristic", "benders"}));
  cbench->add_option("--variant", bench.variant)
      ->check(CLI::IsMember({"domp-mst", "pmedt-domp"}));
  cbench->add_option("--cut", bench.cut)
      ->check(CLI::IsMember({"classical", "dual"}));
  cbench->add_option("-o,--out", bench.out, "CSV path (stdout if absent)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*cgen) return run_gen(gen);
    if (*ceval) return run_eval(eval);
    if (*csolve) return run_solve(solve);
    if (*cexp) return run_export(exp);
    if (*cprep) return run_preprocess(prep);
    if (*cver) return run_verify(verify);
    if (*cbench) return run_bench(bench);
  } catch (const OmtError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
