#pragma once

#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sps/value.hpp"

namespace sps {

class Term;
struct Assertion;

// Variable name -> value. Ordered so printing and ids are deterministic.
using Bindings = std::map<std::string, Value>;

// Names of the builtin operators handled directly by the evaluator.
inline constexpr const char* kConcatOp = "++";
inline constexpr const char* kCondAssertOp = "|";
bool is_arithmetic_op(const std::string& name);
bool is_builtin_op(const std::string& name);

// Immutable term tree with shared structure.
//
//   Literal      an individual, real, string or other constant value
//   Variable     a declared schema variable
//   Apply        operator application O(t1,...,tn); builtins + - * / ++ |
//   Conditional  <c1 and ... and ck, then, else>
//   Tuple        (t1,...,tk), k >= 2, nested tuples are flattened
//   Quote        [a = b], a reified assertion; evaluates to its syntax
//   InstanceRef  r[x=t,...], the reified id of a schema instance
class Term {
 public:
  enum class Kind { Literal, Variable, Apply, Conditional, Tuple, Quote, InstanceRef };

  Term();  // the literal `undefined`

  static Term literal(Value v);
  static Term individual(std::string name) { return literal(Value::atom(std::move(name))); }
  static Term real(double v) { return literal(Value::real(v)); }
  static Term variable(std::string name);
  static Term apply(std::string op, std::vector<Term> args = {});
  static Term conditional(std::vector<Assertion> condition, Term then_term, Term else_term);
  static Term tuple(std::vector<Term> items);
  static Term quote(Assertion a);
  static Term instance_ref(std::string rule, std::vector<std::pair<std::string, Term>> bindings);

  Kind kind() const;
  const Value& value() const;
  // Variable name, operator name, or InstanceRef rule id.
  const std::string& name() const;
  // Apply arguments, Tuple items, Conditional {then, else}, InstanceRef binding terms.
  std::span<const Term> args() const;
  // Conditional condition, or the single quoted assertion.
  std::span<const Assertion> conditions() const;
  // InstanceRef variable names, parallel to args().
  std::span<const std::string> binding_names() const;

  const Term& then_term() const { return args()[0]; }
  const Term& else_term() const { return args()[1]; }

  bool is_ground() const;
  void collect_variables(std::set<std::string>& out) const;
  // Replaces bound variables by literals; unbound variables stay.
  Term substitute(const Bindings& b) const;

  // Canonical concrete syntax, also used by the DSL printer.
  std::string str() const;

  friend bool operator==(const Term& a, const Term& b);

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Equality t1 = t2, or its negation (holds iff the positive form fails).
struct Assertion {
  Term lhs;
  Term rhs;
  bool negated = false;

  Assertion() = default;
  Assertion(Term l, Term r, bool neg = false)
      : lhs(std::move(l)), rhs(std::move(r)), negated(neg) {}
  // Shorthand `t` for `t = true`.
  static Assertion truth(Term t) { return {std::move(t), Term::literal(Value::truth())}; }

  Assertion substitute(const Bindings& b) const {
    return {lhs.substitute(b), rhs.substitute(b), negated};
  }
  bool is_ground() const { return lhs.is_ground() && rhs.is_ground(); }
  void collect_variables(std::set<std::string>& out) const {
    lhs.collect_variables(out);
    rhs.collect_variables(out);
  }
  Assertion negation() const { return {lhs, rhs, !negated}; }
  std::string str() const;

  friend bool operator==(const Assertion& a, const Assertion& b) {
    return a.negated == b.negated && a.lhs == b.lhs && a.rhs == b.rhs;
  }
};

std::string join_assertions(std::span<const Assertion> as, const char* sep);

}  // namespace sps
