#include <type_traits>

#include "sps/dsl/parser.hpp"
#include "sps/value.hpp"

namespace sps::dsl {

namespace {

std::string join(const std::vector<std::string>& xs, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += xs[i];
  }
  return out;
}

std::string operand(const Expr& e) {
  if (e.kind == Expr::Kind::Infix || e.kind == Expr::Kind::Cond) return "(" + print_expr(e) + ")";
  return print_expr(e);
}

std::string exprs(const std::vector<Expr>& es, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < es.size(); ++i) {
    if (i) out += sep;
    out += print_expr(es[i]);
  }
  return out;
}

std::string assertions(const std::vector<AssertionExpr>& as, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < as.size(); ++i) {
    if (i) out += sep;
    out += print_assertion(as[i]);
  }
  return out;
}

}  // namespace

std::string print_expr(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Ident:
      return e.name;
    case Expr::Kind::Call:
      return e.name + "(" + exprs(e.args, ",") + ")";
    case Expr::Kind::Number:
      return format_real(e.number);
    case Expr::Kind::String:
      return "\"" + join(e.symbols, " ") + "\"";
    case Expr::Kind::Infix:
      return operand(e.args[0]) + " " + e.name + " " + operand(e.args[1]);
    case Expr::Kind::Cond:
      return "if " + assertions(e.conds, " and ") + " then " + operand(e.args[0]) + " else " +
             operand(e.args[1]);
    case Expr::Kind::Tuple:
      return "(" + exprs(e.args, ",") + ")";
    case Expr::Kind::Quote:
      return "[" + print_assertion(e.conds.front()) + "]";
    case Expr::Kind::InstRef: {
      std::string out = e.name + "[";
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) out += ",";
        out += e.names[i] + "=" + print_expr(e.args[i]);
      }
      return out + "]";
    }
  }
  return {};
}

std::string print_assertion(const AssertionExpr& a) {
  std::string out = print_expr(a.lhs);
  if (a.rhs) out += (a.negated ? " != " : " = ") + print_expr(*a.rhs);
  return out;
}

std::string print(const Document& doc) {
  std::string out;
  for (const auto& item : doc.items) {
    std::visit(
        [&out](const auto& d) {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, IndividualDecl>) {
            out += "individual " + join(d.names, ", ") + ";\n";
          } else if constexpr (std::is_same_v<T, ConceptDecl>) {
            out += "concept " + d.name + " = ";
            if (d.form == ConceptDecl::Form::Set) {
              out += "{" + exprs(d.members, ", ") + "}";
            } else if (d.form == ConceptDecl::Form::Strings) {
              out += "strings {" + join(d.alphabet, ", ") + "} max " + std::to_string(d.bound);
            } else {
              std::vector<std::string> conns;
              for (const auto& [c, n] : d.connectives) conns.push_back(c + "/" + std::to_string(n));
              out += "formulas {" + join(d.alphabet, ", ") + "} using " + join(conns, ", ") + " depth " +
                     std::to_string(d.bound);
            }
            out += ";\n";
          } else if constexpr (std::is_same_v<T, OperatorDecl>) {
            out += (d.constructor ? "constructor " : "operator ") + d.name;
            if (!d.domain.empty()) out += "(" + join(d.domain, ", ") + ")";
            if (d.range) out += " -> " + *d.range;
            out += ";\n";
          } else if constexpr (std::is_same_v<T, RuleDecl>) {
            out += (d.schema ? "schema " : "rule ") + d.id + ": ";
            if (!d.antecedent.empty()) out += assertions(d.antecedent, ", ") + " ";
            out += "-> " + print_assertion(d.consequent);
            for (std::size_t i = 0; i < d.where.size(); ++i)
              out += (i ? ", " : " where ") + d.where[i].var + ": " + d.where[i].concept_name;
            out += ";\n";
          } else if constexpr (std::is_same_v<T, ConstantDecl>) {
            out += "constant " + join(d.ids, ", ") + ";\n";
          } else if constexpr (std::is_same_v<T, GroupDecl>) {
            out += "group " + d.name;
            if (!d.members.empty()) out += " = " + join(d.members, ", ");
            out += ";\n";
          } else if constexpr (std::is_same_v<T, PreferDecl>) {
            out += "prefer " + d.better + " over " + d.worse + ";\n";
          } else if constexpr (std::is_same_v<T, OrderDecl>) {
            out += "order " + d.first + " then " + d.second + ";\n";
          } else if constexpr (std::is_same_v<T, PrDecl>) {
            out += "pr(" + print_expr(d.subject) + ") = " + format_real(d.value) + ";\n";
          } else if constexpr (std::is_same_v<T, InitDecl>) {
            out += "init {\n";
            for (const auto& f : d.facts) out += "  " + print_assertion(f) + ";\n";
            out += "}\n";
          } else if constexpr (std::is_same_v<T, EventsDecl>) {
            out += "events {\n";
            for (const auto& s : d.steps)
              out += "  " + std::to_string(s.step) + ": " + assertions(s.facts, ", ") + ";\n";
            out += "}\n";
          } else if constexpr (std::is_same_v<T, ConfigDecl>) {
            out += "config {\n";
            for (const auto& e : d.entries) out += "  " + e.key + " = " + e.value + ";\n";
            out += "}\n";
          }
        },
        item);
  }
  return out;
}

}  // namespace sps::dsl
