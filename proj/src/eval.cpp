#include "sps/eval.hpp"

#include <vector>

#include "sps/error.hpp"

namespace sps {

namespace {

Value arithmetic(const std::string& op, const Value& a, const Value& b) {
  if (a.is_undefined() || b.is_undefined()) return Value::undefined();
  if (!a.is_real() || !b.is_real())
    throw Error(ErrorCode::Arithmetic,
                "operator " + op + " needs real operands, got " + a.text() + " and " + b.text());
  double x = a.as_real(), y = b.as_real();
  if (op == "+") return Value::real(x + y);
  if (op == "-") return Value::real(x - y);
  if (op == "*") return Value::real(x * y);
  if (y == 0.0) throw Error(ErrorCode::Arithmetic, "division by zero in " + a.text() + " / " + b.text());
  return Value::real(x / y);
}

Value concat(const Value& a, const Value& b) {
  if (a.is_undefined() || b.is_undefined()) return Value::undefined();
  auto x = as_sequence(a);
  auto y = as_sequence(b);
  x.insert(x.end(), y.begin(), y.end());
  return Value::seq(std::move(x));
}

const Operator& lookup_operator(const std::string& name, const Structure& s) {
  const Operator* op = s.find_operator(name);
  if (!op) throw Error(ErrorCode::DomainViolation, "unknown operator " + name);
  return *op;
}

}  // namespace

void check_domain(const Operator& op, std::span<const Value> args, const Structure& s) {
  if (args.size() != op.arity())
    throw Error(ErrorCode::DomainViolation,
                "operator " + op.name + " expects " + std::to_string(op.arity()) + " arguments, got " +
                    std::to_string(args.size()));
  for (std::size_t i = 0; i < args.size(); ++i) {
    const Concept* c = s.find_concept(op.domain[i]);
    if (!c || !c->contains(args[i], s))
      throw Error(ErrorCode::DomainViolation, "argument " + args[i].text() + " of " + op.name +
                                                  " is not in " + op.domain[i]);
  }
}

Value eval_term(const Term& t, const WorldState& w, const Structure& s) {
  switch (t.kind()) {
    case Term::Kind::Literal:
      return t.value();
    case Term::Kind::Variable:
      throw Error(ErrorCode::NonGround, "unbound variable " + t.name());
    case Term::Kind::Apply: {
      const std::string& name = t.name();
      std::vector<Value> args;
      args.reserve(t.args().size());
      for (const auto& a : t.args()) args.push_back(eval_term(a, w, s));
      if (is_arithmetic_op(name)) return arithmetic(name, args.at(0), args.at(1));
      if (name == kConcatOp) return concat(args.at(0), args.at(1));
      if (name == kCondAssertOp) {
        for (const auto& a : args)
          if (!a.is_assertion())
            throw Error(ErrorCode::DomainViolation, "operand " + a.text() + " of | is not an assertion");
        return Value::compound(kCondAssertOp, std::move(args));
      }
      const Operator& op = lookup_operator(name, s);
      check_domain(op, args, s);
      if (op.constructor) return Value::compound(name, std::move(args));
      return w.get(make_key(name, std::move(args)));
    }
    case Term::Kind::Conditional:
      return holds_all(t.conditions(), w, s) ? eval_term(t.then_term(), w, s)
                                             : eval_term(t.else_term(), w, s);
    case Term::Kind::Tuple: {
      std::vector<Value> items;
      for (const auto& a : t.args()) items.push_back(eval_term(a, w, s));
      return Value::tuple(std::move(items));
    }
    case Term::Kind::Quote:
      if (!t.is_ground()) throw Error(ErrorCode::NonGround, "non-ground quote " + t.str());
      return syntax_value(t);
    case Term::Kind::InstanceRef: {
      std::string id = t.name() + "[";
      for (std::size_t i = 0; i < t.args().size(); ++i) {
        if (i) id += ",";
        id += t.binding_names()[i] + "=" + eval_term(t.args()[i], w, s).text();
      }
      return Value::atom(id + "]");
    }
  }
  return Value::undefined();
}

bool defined_equal(const Value& a, const Value& b) {
  if (a.is_undefined() || b.is_undefined()) return false;
  if (a.is_tuple() && b.is_tuple()) {
    if (a.args().size() != b.args().size()) return false;
    for (std::size_t i = 0; i < a.args().size(); ++i)
      if (!defined_equal(a.args()[i], b.args()[i])) return false;
    return true;
  }
  return a == b;
}

bool holds(const Assertion& a, const WorldState& w, const Structure& s) {
  bool positive = defined_equal(eval_term(a.lhs, w, s), eval_term(a.rhs, w, s));
  return positive != a.negated;
}

bool holds_all(std::span<const Assertion> as, const WorldState& w, const Structure& s) {
  for (const auto& a : as)
    if (!holds(a, w, s)) return false;
  return true;
}

std::string canonical_form(const Term& t) {
  if (!t.is_ground()) throw Error(ErrorCode::NonGround, "term " + t.str() + " is not ground");
  return t.str();
}

Value syntax_value(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Literal:
      return t.value();
    case Term::Kind::Variable:
      throw Error(ErrorCode::NonGround, "unbound variable " + t.name());
    case Term::Kind::Apply:
    case Term::Kind::InstanceRef: {
      if (t.kind() == Term::Kind::InstanceRef) {
        std::string id = t.name() + "[";
        for (std::size_t i = 0; i < t.args().size(); ++i) {
          if (i) id += ",";
          id += t.binding_names()[i] + "=" + syntax_value(t.args()[i]).text();
        }
        return Value::atom(id + "]");
      }
      std::vector<Value> args;
      for (const auto& a : t.args()) args.push_back(syntax_value(a));
      return Value::compound(t.name(), std::move(args));
    }
    case Term::Kind::Tuple: {
      std::vector<Value> items;
      for (const auto& a : t.args()) items.push_back(syntax_value(a));
      return Value::tuple(std::move(items));
    }
    case Term::Kind::Quote: {
      const Assertion& a = t.conditions().front();
      return Value::compound(a.negated ? "!=" : "=", {syntax_value(a.lhs), syntax_value(a.rhs)});
    }
    case Term::Kind::Conditional:
      return Value::atom(t.str());
  }
  return Value::undefined();
}

bool is_assignable(const Term& t, const Structure& s) {
  if (t.kind() == Term::Kind::Tuple) {
    for (const auto& a : t.args())
      if (!is_assignable(a, s)) return false;
    return true;
  }
  if (t.kind() != Term::Kind::Apply) return false;
  if (is_builtin_op(t.name())) return false;
  const Operator* op = s.find_operator(t.name());
  return op && !op->constructor;
}

Value eval_key(const Term& t, const WorldState& w, const Structure& s) {
  if (!is_assignable(t, s) || t.kind() != Term::Kind::Apply)
    throw Error(ErrorCode::InvalidRule, "term " + t.str() + " cannot be assigned");
  std::vector<Value> args;
  for (const auto& a : t.args()) args.push_back(eval_term(a, w, s));
  check_domain(*s.find_operator(t.name()), args, s);
  return make_key(t.name(), std::move(args));
}

}  // namespace sps
