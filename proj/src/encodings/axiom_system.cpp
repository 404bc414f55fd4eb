#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "common.hpp"
#include "sps/encodings/encodings.hpp"

namespace sps::enc {

using namespace detail;

namespace {

struct Formula {
  std::string name;
  std::vector<Formula> args;
  bool variable = false;
};

class FormulaParser {
 public:
  FormulaParser(const std::string& text, const AxiomSystemDesc& d) : text_(text), d_(d) {}

  Formula parse() {
    Formula f = formula();
    skip();
    if (i_ != text_.size()) fail("unexpected '" + text_.substr(i_) + "'");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) { invalid("formula '" + text_ + "': " + msg); }

  void skip() {
    while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_]))) ++i_;
  }

  std::string ident() {
    skip();
    std::size_t b = i_;
    while (i_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[i_])) || text_[i_] == '_')) ++i_;
    if (b == i_) fail("expected a name");
    return text_.substr(b, i_ - b);
  }

  Formula formula() {
    Formula f;
    f.name = ident();
    skip();
    const Connective* conn = nullptr;
    for (const auto& c : d_.connectives)
      if (c.name == f.name) conn = &c;
    if (i_ < text_.size() && text_[i_] == '(') {
      if (!conn) fail("'" + f.name + "' is not a connective");
      ++i_;
      for (;;) {
        f.args.push_back(formula());
        skip();
        if (i_ < text_.size() && text_[i_] == ',') {
          ++i_;
          continue;
        }
        if (i_ < text_.size() && text_[i_] == ')') {
          ++i_;
          break;
        }
        fail("expected ',' or ')'");
      }
      if (f.args.size() != conn->arity)
        fail("'" + f.name + "' takes " + std::to_string(conn->arity) + " arguments");
      return f;
    }
    if (conn) {
      if (conn->arity != 0) fail("'" + f.name + "' needs arguments");
      return f;
    }
    f.variable = std::find(d_.atoms.begin(), d_.atoms.end(), f.name) == d_.atoms.end();
    return f;
  }

  const std::string& text_;
  const AxiomSystemDesc& d_;
  std::size_t i_ = 0;
};

std::size_t depth(const Formula& f) {
  std::size_t m = 0;
  for (const auto& a : f.args) m = std::max(m, depth(a) + 1);
  return m;
}

void variables(const Formula& f, std::vector<std::string>& out) {
  if (f.variable && std::find(out.begin(), out.end(), f.name) == out.end()) out.push_back(f.name);
  for (const auto& a : f.args) variables(a, out);
}

std::string print(const Formula& f) {
  if (f.args.empty()) return f.name;
  std::string s = f.name + "(";
  for (std::size_t i = 0; i < f.args.size(); ++i) {
    if (i) s += ", ";
    s += print(f.args[i]);
  }
  return s + ")";
}

Formula parse_formula(const std::string& text, const AxiomSystemDesc& d) {
  return FormulaParser(text, d).parse();
}

std::string where_clause(const std::vector<std::string>& vars) {
  if (vars.empty()) return "";
  std::string s = " where ";
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (i) s += ", ";
    s += vars[i] + ": L";
  }
  return s;
}

// Deepest pattern in any axiom or inference rule.
std::size_t pattern_depth(const AxiomSystemDesc& d) {
  std::size_t m = 0;
  for (const auto& a : d.axioms) m = std::max(m, depth(parse_formula(a.formula, d)));
  for (const auto& r : d.rules) {
    for (const auto& p : r.premises) m = std::max(m, depth(parse_formula(p, d)));
    m = std::max(m, depth(parse_formula(r.conclusion, d)));
  }
  return m;
}

}  // namespace

AxiomSystemDesc parse_axiom_system(std::string_view text) {
  json j = parse_json(text);
  AxiomSystemDesc d;
  d.atoms = get_strings(j, "atoms");
  d.depth = get_size(j, "depth");
  for (const auto& c : field(j, "connectives")) d.connectives.push_back({get_string(c, "name"), get_size(c, "arity")});
  if (has(j, "axioms"))
    for (const auto& a : field(j, "axioms")) d.axioms.push_back({get_string(a, "name"), get_string(a, "formula")});
  if (has(j, "rules"))
    for (const auto& r : field(j, "rules"))
      d.rules.push_back({get_string(r, "name"), get_strings(r, "premises"), get_string(r, "conclusion")});
  if (has(j, "theorems")) d.theorems = get_strings(j, "theorems");
  validate(d);
  return d;
}

void validate(const AxiomSystemDesc& d) {
  if (d.depth < 1) invalid("formula depth bound must be at least 1");
  Names names({"L", "Formula", "Prove"});
  for (const auto& a : d.atoms) names.claim(a, "atom");
  for (const auto& c : d.connectives) names.claim(c.name, "connective");
  if (d.atoms.empty()) invalid("at least one atom is required");
  if (d.connectives.empty()) invalid("at least one connective is required");
  auto check_vars = [&](const Formula& f) {
    std::vector<std::string> vs;
    variables(f, vs);
    for (const auto& v : vs)
      if (!is_identifier(v) || v == "L" || v == "Formula" || v == "Prove")
        invalid("'" + v + "' cannot be a formula variable");
  };
  for (const auto& a : d.axioms) {
    names.claim(a.name, "axiom");
    check_vars(parse_formula(a.formula, d));
  }
  for (const auto& r : d.rules) {
    names.claim(r.name, "inference rule");
    std::vector<std::string> premise_vars;
    for (const auto& p : r.premises) {
      Formula f = parse_formula(p, d);
      check_vars(f);
      variables(f, premise_vars);
    }
    Formula c = parse_formula(r.conclusion, d);
    check_vars(c);
    std::vector<std::string> cv;
    variables(c, cv);
    for (const auto& v : cv)
      if (std::find(premise_vars.begin(), premise_vars.end(), v) == premise_vars.end() && !r.premises.empty())
        invalid("variable '" + v + "' of rule '" + r.name + "' does not occur in a premise");
  }
  for (const auto& t : d.theorems) {
    Formula f = parse_formula(t, d);
    std::vector<std::string> vs;
    variables(f, vs);
    if (!vs.empty()) invalid("theorem '" + t + "' mentions unknown atom '" + vs.front() + "'");
    if (depth(f) > d.depth)
      invalid("theorem '" + t + "' is outside the depth bound " + std::to_string(d.depth));
  }
}

std::string emit_axiom_system(const AxiomSystemDesc& d) {
  validate(d);
  std::vector<std::string> conns;
  for (const auto& c : d.connectives) conns.push_back(c.name + "/" + std::to_string(c.arity));
  const std::string using_clause = conns.empty() ? "" : " using " + join(conns, ", ");
  const std::size_t outer = d.depth + pattern_depth(d);

  std::ostringstream out;
  out << "# Axiom system: formulas up to depth " << d.depth << " (L), provable up to depth " << outer
      << ".\n";
  out << "individual " << join(d.atoms, ", ") << ";\n";
  out << "concept L = formulas {" << join(d.atoms, ", ") << "}" << using_clause << " depth " << d.depth << ";\n";
  out << "concept Formula = formulas {" << join(d.atoms, ", ") << "}" << using_clause << " depth " << outer
      << ";\n";
  for (const auto& c : d.connectives) {
    out << "constructor " << c.name;
    if (c.arity) {
      out << "(";
      for (std::size_t i = 0; i < c.arity; ++i) out << (i ? ", " : "") << "Formula";
      out << ")";
    }
    out << ";\n";
  }
  out << "operator Prove(Formula) -> Bool;\n";
  for (const auto& a : d.axioms) {
    Formula f = parse_formula(a.formula, d);
    std::vector<std::string> vs;
    variables(f, vs);
    out << (vs.empty() ? "rule " : "schema ") << a.name << ": -> Prove(" << print(f) << ")"
        << where_clause(vs) << ";\n";
  }
  for (const auto& r : d.rules) {
    std::vector<std::string> vs, premises;
    for (const auto& p : r.premises) {
      Formula f = parse_formula(p, d);
      variables(f, vs);
      premises.push_back("Prove(" + print(f) + ")");
    }
    Formula c = parse_formula(r.conclusion, d);
    variables(c, vs);
    out << (vs.empty() ? "rule " : "schema ") << r.name << ": " << join(premises, ", ") << " -> Prove("
        << print(c) << ")" << where_clause(vs) << ";\n";
  }
  if (!d.theorems.empty()) {
    out << "init {\n";
    for (const auto& t : d.theorems) out << "  Prove(" << print(parse_formula(t, d)) << ");\n";
    out << "}\n";
  }
  return out.str();
}

dsl::Program compile_axiom_system(const AxiomSystemDesc& d) {
  return dsl::load(emit_axiom_system(d), "<axiom system>");
}

}  // namespace sps::enc
