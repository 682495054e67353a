#pragma once
// Mixed-integer model intermediate representation plus a plain-text LP
// reader/writer.
//
// The writer emits sections Minimize / Subject To / Bounds / General /
// Binary / End with one constraint per line, variables and rows in
// declaration order, numbers at up to 12 significant digits, and
// deterministic line wrapping.  The Bounds section lists every variable
// (no defaults are skipped) so a parsed file preserves declaration order
// and re-exports byte-identically.  Comment lines (leading backslash)
// before the objective carry free-form notes, e.g. the description of a
// lazily separated constraint family.

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "omt/common.hpp"
#include "omt/simplex.hpp"

namespace omt {

enum class VarKind { Continuous, Binary, Integer };

// Structural roles: X allocation, Z tree edge, XL sorted allocation copy,
// U covering, MU master surrogate; Y/L/F/R/Q belong to tree realizations.
enum class VarTag { X, Z, XL, U, Y, L, F, R, Q, MU, Other };

// Core rows define the formulation proper; TreePlaceholder stands for the
// abstract spanning-tree requirement; Tree rows realize it; RedundantChain
// and Staircase are optional strengthening families; Master rows are
// decomposition cuts.
enum class RowTag { Core, TreePlaceholder, RedundantChain, Staircase, Tree, Master };

struct ModelVar {
  std::string name;
  double obj = 0.0;
  double lb = 0.0;
  double ub = 0.0;
  VarKind kind = VarKind::Continuous;
  VarTag tag = VarTag::Other;
};

struct ModelRow {
  std::string name;
  std::vector<std::pair<int, double>> terms;  // (var id, coefficient)
  LpSense sense = LpSense::LE;
  double rhs = 0.0;
  RowTag tag = RowTag::Core;
};

struct Model {
  std::string name;
  bool maximize = false;
  std::vector<ModelVar> vars;
  std::vector<ModelRow> rows;
  std::vector<std::string> notes;

  int add_var(const std::string& name, double obj, double lb, double ub,
              VarKind kind, VarTag tag);
  int add_row(const std::string& name,
              std::vector<std::pair<int, double>> terms, LpSense sense,
              double rhs, RowTag tag);
  // Index of a declared variable name; throws OmtError("unknown variable").
  int var(const std::string& name) const;
  bool has_var(const std::string& name) const;

  // Variables carrying the formulation itself (tags X, Z, XL, U) as
  // opposed to tree-realization or decomposition machinery.
  int structural_var_count() const;
  // Rows tagged Core or TreePlaceholder; the pair (structural variables,
  // core rows) is what the closed-form size predictions talk about.
  int core_row_count() const;

  // Continuous relaxation (integrality dropped; bounds kept).
  LpProblem to_lp() const;

 private:
  std::unordered_map<std::string, int> index_;
};

// Name-based classification used when reading a model back from text.
VarTag var_tag_from_name(const std::string& name);
RowTag row_tag_from_name(const std::string& name);

std::string export_lp(const Model& m);
Model parse_lp(const std::string& text);

double objective_value(const Model& m, const std::vector<double>& point);

struct PointViolation {
  std::string where;  // row name, or "<var> lower"/"<var> upper"/"<var> integrality"
  double amount = 0.0;
};

// All row, bound, and (optionally) integrality violations of a point,
// each reported with its absolute infeasibility amount.
std::vector<PointViolation> check_point(const Model& m,
                                        const std::vector<double>& point,
                                        double tol = kFeasTol,
                                        bool check_integrality = true);

}  // namespace omt
