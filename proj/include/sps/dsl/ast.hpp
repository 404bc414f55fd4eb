#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace sps::dsl {

// Source position; ignored by equality so printed-and-reparsed documents
// compare equal to the original.
struct Pos {
  int line = 0;
  int col = 0;
  friend bool operator==(const Pos&, const Pos&) { return true; }
};

struct AssertionExpr;

struct Expr {
  enum class Kind { Ident, Call, Number, String, Infix, Cond, Tuple, Quote, InstRef };

  Kind kind = Kind::Ident;
  std::string name;                  // identifier, operator, infix symbol, rule id
  double number = 0.0;
  std::vector<std::string> symbols;  // string literal
  std::vector<Expr> args;            // call args, infix operands, tuple items, {then, else}, binding terms
  std::vector<AssertionExpr> conds;  // condition, or the quoted assertion
  std::vector<std::string> names;    // InstRef binding variables
  Pos pos;

  friend bool operator==(const Expr&, const Expr&);
};

struct AssertionExpr {
  Expr lhs;
  std::optional<Expr> rhs;  // absent for the shorthand `t`
  bool negated = false;
  Pos pos;

  friend bool operator==(const AssertionExpr&, const AssertionExpr&) = default;
};

inline bool operator==(const Expr& a, const Expr& b) {
  return a.kind == b.kind && a.name == b.name && a.number == b.number && a.symbols == b.symbols &&
         a.args == b.args && a.conds == b.conds && a.names == b.names;
}

struct IndividualDecl {
  std::vector<std::string> names;
  Pos pos;
  friend bool operator==(const IndividualDecl&, const IndividualDecl&) = default;
};

struct ConceptDecl {
  enum class Form { Set, Strings, Formulas };
  std::string name;
  Form form = Form::Set;
  std::vector<Expr> members;
  std::vector<std::string> alphabet;  // string symbols or formula atoms
  std::vector<std::pair<std::string, std::size_t>> connectives;
  std::size_t bound = 0;
  Pos pos;
  friend bool operator==(const ConceptDecl&, const ConceptDecl&) = default;
};

struct OperatorDecl {
  std::string name;
  std::vector<std::string> domain;
  std::optional<std::string> range;
  bool constructor = false;
  Pos pos;
  friend bool operator==(const OperatorDecl&, const OperatorDecl&) = default;
};

struct VarDecl {
  std::string var;
  std::string concept_name;
  Pos pos;
  friend bool operator==(const VarDecl&, const VarDecl&) = default;
};

struct RuleDecl {
  bool schema = false;  // declared with `schema` rather than `rule`
  std::string id;
  std::vector<AssertionExpr> antecedent;
  AssertionExpr consequent;
  std::vector<VarDecl> where;
  Pos pos;
  friend bool operator==(const RuleDecl&, const RuleDecl&) = default;
};

struct ConstantDecl {
  std::vector<std::string> ids;
  Pos pos;
  friend bool operator==(const ConstantDecl&, const ConstantDecl&) = default;
};

// `group g = r1, r2;` (finite group) or `group r;` (all instances of r).
struct GroupDecl {
  std::string name;
  std::vector<std::string> members;
  Pos pos;
  friend bool operator==(const GroupDecl&, const GroupDecl&) = default;
};

struct PreferDecl {
  std::string better;
  std::string worse;
  Pos pos;
  friend bool operator==(const PreferDecl&, const PreferDecl&) = default;
};

// `order first then second;`: second may only fire after first has.
struct OrderDecl {
  std::string first;
  std::string second;
  Pos pos;
  friend bool operator==(const OrderDecl&, const OrderDecl&) = default;
};

struct PrDecl {
  Expr subject;
  double value = 0.0;
  Pos pos;
  friend bool operator==(const PrDecl&, const PrDecl&) = default;
};

struct InitDecl {
  std::vector<AssertionExpr> facts;
  Pos pos;
  friend bool operator==(const InitDecl&, const InitDecl&) = default;
};

struct EventStep {
  std::size_t step = 0;
  std::vector<AssertionExpr> facts;
  Pos pos;
  friend bool operator==(const EventStep&, const EventStep&) = default;
};

struct EventsDecl {
  std::vector<EventStep> steps;
  Pos pos;
  friend bool operator==(const EventsDecl&, const EventsDecl&) = default;
};

struct ConfigEntry {
  std::string key;
  std::string value;  // identifier or number text
  Pos pos;
  friend bool operator==(const ConfigEntry&, const ConfigEntry&) = default;
};

struct ConfigDecl {
  std::vector<ConfigEntry> entries;
  Pos pos;
  friend bool operator==(const ConfigDecl&, const ConfigDecl&) = default;
};

using Item = std::variant<IndividualDecl, ConceptDecl, OperatorDecl, RuleDecl, ConstantDecl, GroupDecl,
                          PreferDecl, OrderDecl, PrDecl, InitDecl, EventsDecl, ConfigDecl>;

struct Document {
  std::vector<Item> items;
  friend bool operator==(const Document&, const Document&) = default;
};

}  // namespace sps::dsl
