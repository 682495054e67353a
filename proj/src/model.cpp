#include "omt/model.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>

namespace omt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kWrapWidth = 76;

// Up to 12 significant digits, shortest form.  All emission decisions key
// off the formatted string so that a parse/re-export cycle reproduces the
// file byte for byte.
std::string fmt(double v) {
  if (v == 0.0) v = 0.0;  // normalize -0
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

bool parse_number(const std::string& tok, double& out) {
  const char* s = tok.c_str();
  char* end = nullptr;
  out = std::strtod(s, &end);
  return end != s && *end == '\0';
}

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream in(line);
  std::string t;
  while (in >> t) toks.push_back(t);
  return toks;
}

// One formatted term, e.g. "x_1_2", "2.5 x_1_2", "- x_1_2", "+ 0.5 z_1_2".
std::string term_string(double coef, const std::string& name, bool first) {
  std::string mag = fmt(std::fabs(coef));
  std::string body = mag == "1" ? name : mag + " " + name;
  if (first) return coef < 0 ? "- " + body : body;
  return (coef < 0 ? "- " : "+ ") + body;
}

void emit_wrapped(std::string line, const std::vector<std::string>& tokens,
                  std::string& out) {
  for (const std::string& tok : tokens) {
    if (line.size() + 1 + tok.size() > kWrapWidth && line.find_first_not_of(' ') != std::string::npos &&
        line.back() != ':') {
      out += line;
      out += '\n';
      line = "   " + tok;
    } else {
      line += ' ';
      line += tok;
    }
  }
  out += line;
  out += '\n';
}

std::string sense_string(LpSense s) {
  switch (s) {
    case LpSense::LE: return "<=";
    case LpSense::GE: return ">=";
    case LpSense::EQ: return "=";
  }
  return "=";
}

}  // namespace

int Model::add_var(const std::string& vname, double obj, double lb, double ub,
                   VarKind kind, VarTag tag) {
  if (index_.count(vname))
    throw OmtError("duplicate variable", vname);
  ModelVar v;
  v.name = vname;
  v.obj = obj;
  v.lb = lb;
  v.ub = ub;
  v.kind = kind;
  v.tag = tag;
  vars.push_back(std::move(v));
  int id = static_cast<int>(vars.size()) - 1;
  index_.emplace(vname, id);
  return id;
}

int Model::add_row(const std::string& rname,
                   std::vector<std::pair<int, double>> terms, LpSense sense,
                   double rhs, RowTag tag) {
  ModelRow r;
  r.name = rname;
  r.terms = std::move(terms);
  r.sense = sense;
  r.rhs = rhs;
  r.tag = tag;
  for (auto [j, a] : r.terms) {
    (void)a;
    if (j < 0 || j >= static_cast<int>(vars.size()))
      throw OmtError("unknown variable", "row " + rname);
  }
  rows.push_back(std::move(r));
  return static_cast<int>(rows.size()) - 1;
}

int Model::var(const std::string& vname) const {
  auto it = index_.find(vname);
  if (it == index_.end()) throw OmtError("unknown variable", vname);
  return it->second;
}

bool Model::has_var(const std::string& vname) const {
  return index_.count(vname) > 0;
}

int Model::structural_var_count() const {
  int k = 0;
  for (const ModelVar& v : vars)
    if (v.tag == VarTag::X || v.tag == VarTag::Z || v.tag == VarTag::XL ||
        v.tag == VarTag::U)
      ++k;
  return k;
}

int Model::core_row_count() const {
  int k = 0;
  for (const ModelRow& r : rows)
    if (r.tag == RowTag::Core || r.tag == RowTag::TreePlaceholder) ++k;
  return k;
}

LpProblem Model::to_lp() const {
  LpProblem lp;
  lp.maximize = maximize;
  for (const ModelVar& v : vars) lp.add_var(v.obj, v.lb, v.ub);
  for (const ModelRow& r : rows) lp.add_row(r.terms, r.sense, r.rhs);
  return lp;
}

VarTag var_tag_from_name(const std::string& name) {
  std::string head = name.substr(0, name.find('_'));
  if (head == "x") return VarTag::X;
  if (head == "z") return VarTag::Z;
  if (head == "xs") return VarTag::XL;
  if (head == "u") return VarTag::U;
  if (head == "y") return VarTag::Y;
  if (head == "l") return VarTag::L;
  if (head == "f") return VarTag::F;
  if (head == "r") return VarTag::R;
  if (head == "q") return VarTag::Q;
  if (head == "mu") return VarTag::MU;
  return VarTag::Other;
}

RowTag row_tag_from_name(const std::string& name) {
  auto starts = [&](const char* p) { return name.rfind(p, 0) == 0; };
  if (starts("tree_card") || starts("tree_dom")) return RowTag::TreePlaceholder;
  if (starts("cover_chain")) return RowTag::RedundantChain;
  if (starts("stair")) return RowTag::Staircase;
  if (starts("mtz_") || starts("flow_") || starts("km_") || starts("sub_") ||
      starts("conn_"))
    return RowTag::Tree;
  if (starts("cut_")) return RowTag::Master;
  return RowTag::Core;
}

std::string export_lp(const Model& m) {
  std::string out;
  for (const std::string& note : m.notes) {
    out += "\\ ";
    out += note;
    out += '\n';
  }
  out += m.maximize ? "Maximize\n" : "Minimize\n";
  {
    std::vector<std::string> toks;
    bool first = true;
    for (const ModelVar& v : m.vars) {
      if (v.obj == 0.0) continue;
      toks.push_back(term_string(v.obj, v.name, first));
      first = false;
    }
    emit_wrapped(" obj:", toks, out);
  }
  out += "Subject To\n";
  for (const ModelRow& r : m.rows) {
    std::vector<std::string> toks;
    bool first = true;
    for (auto [j, a] : r.terms) {
      if (a == 0.0) continue;
      toks.push_back(term_string(a, m.vars[j].name, first));
      first = false;
    }
    toks.push_back(sense_string(r.sense) + " " + fmt(r.rhs));
    emit_wrapped(" " + r.name + ":", toks, out);
  }
  out += "Bounds\n";
  for (const ModelVar& v : m.vars) {
    bool lb_fin = std::isfinite(v.lb), ub_fin = std::isfinite(v.ub);
    if (lb_fin && ub_fin)
      out += " " + fmt(v.lb) + " <= " + v.name + " <= " + fmt(v.ub) + "\n";
    else if (lb_fin)
      out += " " + v.name + " >= " + fmt(v.lb) + "\n";
    else if (ub_fin)
      out += " " + v.name + " <= " + fmt(v.ub) + "\n";
    else
      out += " " + v.name + " free\n";
  }
  bool any_int = false, any_bin = false;
  for (const ModelVar& v : m.vars) {
    any_int |= v.kind == VarKind::Integer;
    any_bin |= v.kind == VarKind::Binary;
  }
  if (any_int) {
    out += "General\n";
    for (const ModelVar& v : m.vars)
      if (v.kind == VarKind::Integer) out += " " + v.name + "\n";
  }
  if (any_bin) {
    out += "Binary\n";
    for (const ModelVar& v : m.vars)
      if (v.kind == VarKind::Binary) out += " " + v.name + "\n";
  }
  out += "End\n";
  return out;
}

namespace {

enum class Section { None, Objective, Rows, Bounds, General, Binary, Done };

struct LogicalLine {
  std::string text;
};

// Glue three-space continuation lines back onto their opening line.
std::vector<std::string> logical_lines(const std::vector<std::string>& phys) {
  std::vector<std::string> out;
  for (const std::string& line : phys) {
    if (line.rfind("   ", 0) == 0 && !out.empty())
      out.back() += line.substr(2);  // keep one separating space
    else
      out.push_back(line);
  }
  return out;
}

}  // namespace

Model parse_lp(const std::string& text) {
  std::vector<std::string> raw;
  {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      raw.push_back(line);
    }
  }

  Model m;
  Section sec = Section::None;
  std::vector<std::string> obj_lines, row_lines, bound_lines, gen_lines,
      bin_lines;
  for (const std::string& line : raw) {
    if (line.empty()) continue;
    if (line[0] == '\\') {
      std::string note = line.substr(1);
      if (!note.empty() && note[0] == ' ') note = note.substr(1);
      m.notes.push_back(note);
      continue;
    }
    if (line == "Minimize" || line == "Maximize") {
      m.maximize = line == "Maximize";
      sec = Section::Objective;
      continue;
    }
    if (line == "Subject To") { sec = Section::Rows; continue; }
    if (line == "Bounds") { sec = Section::Bounds; continue; }
    if (line == "General") { sec = Section::General; continue; }
    if (line == "Binary") { sec = Section::Binary; continue; }
    if (line == "End") { sec = Section::Done; continue; }
    switch (sec) {
      case Section::Objective: obj_lines.push_back(line); break;
      case Section::Rows: row_lines.push_back(line); break;
      case Section::Bounds: bound_lines.push_back(line); break;
      case Section::General: gen_lines.push_back(line); break;
      case Section::Binary: bin_lines.push_back(line); break;
      default:
        throw OmtError("lp parse", "content outside any section: " + line);
    }
  }

  // Variables first: the Bounds section lists every variable in
  // declaration order, so it reconstructs the variable table.
  for (const std::string& line : bound_lines) {
    std::vector<std::string> t = tokenize(line);
    double lo = 0, hi = 0;
    if (t.size() == 5 && t[1] == "<=" && t[3] == "<=") {
      if (!parse_number(t[0], lo) || !parse_number(t[4], hi))
        throw OmtError("lp parse", "bad bounds line: " + line);
      m.add_var(t[2], 0.0, lo, hi, VarKind::Continuous,
                var_tag_from_name(t[2]));
    } else if (t.size() == 3 && t[1] == ">=") {
      if (!parse_number(t[2], lo))
        throw OmtError("lp parse", "bad bounds line: " + line);
      m.add_var(t[0], 0.0, lo, kInf, VarKind::Continuous,
                var_tag_from_name(t[0]));
    } else if (t.size() == 3 && t[1] == "<=") {
      if (!parse_number(t[2], hi))
        throw OmtError("lp parse", "bad bounds line: " + line);
      m.add_var(t[0], 0.0, -kInf, hi, VarKind::Continuous,
                var_tag_from_name(t[0]));
    } else if (t.size() == 2 && t[1] == "free") {
      m.add_var(t[0], 0.0, -kInf, kInf,
                VarKind::Continuous, var_tag_from_name(t[0]));
    } else {
      throw OmtError("lp parse", "bad bounds line: " + line);
    }
  }
  for (const std::string& line : gen_lines) {
    for (const std::string& t : tokenize(line))
      m.vars[m.var(t)].kind = VarKind::Integer;
  }
  for (const std::string& line : bin_lines) {
    for (const std::string& t : tokenize(line))
      m.vars[m.var(t)].kind = VarKind::Binary;
  }

  auto parse_terms = [&m](const std::vector<std::string>& toks, std::size_t k,
                          std::vector<std::pair<int, double>>& terms,
                          LpSense* sense, double* rhs,
                          const std::string& where) {
    double sign = 1.0;
    double coef = 1.0;
    bool have_coef = false;
    for (; k < toks.size(); ++k) {
      const std::string& tok = toks[k];
      if (tok == "+") { sign = 1.0; continue; }
      if (tok == "-") { sign = -1.0; continue; }
      if (tok == "<=" || tok == ">=" || tok == "=") {
        if (sense == nullptr)
          throw OmtError("lp parse", "unexpected sense in " + where);
        *sense = tok == "<=" ? LpSense::LE
                             : (tok == ">=" ? LpSense::GE : LpSense::EQ);
        if (k + 1 != toks.size() - 1 || !parse_number(toks[k + 1], *rhs))
          throw OmtError("lp parse", "bad right-hand side in " + where);
        return;
      }
      double v;
      if (parse_number(tok, v)) {
        coef = v;
        have_coef = true;
        continue;
      }
      terms.emplace_back(m.var(tok), sign * coef);
      sign = 1.0;
      coef = 1.0;
      have_coef = false;
    }
    (void)have_coef;
    if (sense != nullptr)
      throw OmtError("lp parse", "missing sense in " + where);
  };

  for (const std::string& line : logical_lines(obj_lines)) {
    std::vector<std::string> toks = tokenize(line);
    if (toks.empty() || toks[0].back() != ':')
      throw OmtError("lp parse", "bad objective line: " + line);
    std::vector<std::pair<int, double>> terms;
    parse_terms(toks, 1, terms, nullptr, nullptr, "objective");
    for (auto [j, c] : terms) m.vars[j].obj += c;
  }

  for (const std::string& line : logical_lines(row_lines)) {
    std::vector<std::string> toks = tokenize(line);
    if (toks.empty() || toks[0].back() != ':')
      throw OmtError("lp parse", "bad constraint line: " + line);
    std::string rname = toks[0].substr(0, toks[0].size() - 1);
    std::vector<std::pair<int, double>> terms;
    LpSense sense = LpSense::LE;
    double rhs = 0;
    parse_terms(toks, 1, terms, &sense, &rhs, "row " + rname);
    m.add_row(rname, std::move(terms), sense, rhs, row_tag_from_name(rname));
  }
  return m;
}

double objective_value(const Model& m, const std::vector<double>& point) {
  if (point.size() != m.vars.size())
    throw OmtError("point size", "expected " + std::to_string(m.vars.size()) +
                                     " values, got " +
                                     std::to_string(point.size()));
  double v = 0;
  for (std::size_t j = 0; j < m.vars.size(); ++j)
    v += m.vars[j].obj * point[j];
  return v;
}

std::vector<PointViolation> check_point(const Model& m,
                                        const std::vector<double>& point,
                                        double tol, bool check_integrality) {
  if (point.size() != m.vars.size())
    throw OmtError("point size", "expected " + std::to_string(m.vars.size()) +
                                     " values, got " +
                                     std::to_string(point.size()));
  std::vector<PointViolation> out;
  for (std::size_t j = 0; j < m.vars.size(); ++j) {
    const ModelVar& v = m.vars[j];
    if (point[j] < v.lb - tol)
      out.push_back({v.name + " lower", v.lb - point[j]});
    if (point[j] > v.ub + tol)
      out.push_back({v.name + " upper", point[j] - v.ub});
    if (check_integrality &&
        (v.kind == VarKind::Binary || v.kind == VarKind::Integer)) {
      double frac = std::fabs(point[j] - std::round(point[j]));
      if (frac > tol) out.push_back({v.name + " integrality", frac});
    }
  }
  for (const ModelRow& r : m.rows) {
    double lhs = 0;
    for (auto [j, a] : r.terms) lhs += a * point[j];
    double amount = 0;
    switch (r.sense) {
      case LpSense::LE: amount = lhs - r.rhs; break;
      case LpSense::GE: amount = r.rhs - lhs; break;
      case LpSense::EQ: amount = std::fabs(lhs - r.rhs); break;
    }
    if (amount > tol) out.push_back({r.name, amount});
  }
  return out;
}

}  // namespace omt
