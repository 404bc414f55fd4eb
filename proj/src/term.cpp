#include "sps/term.hpp"

#include <stdexcept>

namespace sps {

struct Term::Node {
  Kind kind = Kind::Literal;
  Value value;
  std::string name;
  std::vector<Term> args;
  std::vector<Assertion> conds;
  std::vector<std::string> names;
  bool ground = true;
};

bool is_arithmetic_op(const std::string& name) {
  return name == "+" || name == "-" || name == "*" || name == "/";
}

bool is_builtin_op(const std::string& name) {
  return is_arithmetic_op(name) || name == kConcatOp || name == kCondAssertOp;
}

namespace {

bool all_ground(std::span<const Term> ts) {
  for (const auto& t : ts)
    if (!t.is_ground()) return false;
  return true;
}

bool is_infix(const Term& t) {
  return t.kind() == Term::Kind::Apply && is_builtin_op(t.name());
}

std::string operand(const Term& t) {
  if (is_infix(t) || t.kind() == Term::Kind::Conditional) return "(" + t.str() + ")";
  return t.str();
}

}  // namespace

Term::Term() : Term(literal(Value::undefined())) {}

Term Term::literal(Value v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Literal;
  n->value = std::move(v);
  return Term(std::move(n));
}

Term Term::variable(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Variable;
  n->name = std::move(name);
  n->ground = false;
  return Term(std::move(n));
}

Term Term::apply(std::string op, std::vector<Term> args) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Apply;
  n->name = std::move(op);
  n->ground = all_ground(args);
  n->args = std::move(args);
  return Term(std::move(n));
}

Term Term::conditional(std::vector<Assertion> condition, Term then_term, Term else_term) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Conditional;
  n->ground = then_term.is_ground() && else_term.is_ground();
  for (const auto& a : condition) n->ground = n->ground && a.is_ground();
  n->conds = std::move(condition);
  n->args = {std::move(then_term), std::move(else_term)};
  return Term(std::move(n));
}

Term Term::tuple(std::vector<Term> items) {
  std::vector<Term> flat;
  for (auto& it : items) {
    if (it.kind() == Kind::Tuple) {
      for (const auto& sub : it.args()) flat.push_back(sub);
    } else {
      flat.push_back(std::move(it));
    }
  }
  if (flat.size() == 1) return flat.front();
  auto n = std::make_shared<Node>();
  n->kind = Kind::Tuple;
  n->ground = all_ground(flat);
  n->args = std::move(flat);
  return Term(std::move(n));
}

Term Term::quote(Assertion a) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Quote;
  n->ground = a.is_ground();
  n->conds = {std::move(a)};
  return Term(std::move(n));
}

Term Term::instance_ref(std::string rule, std::vector<std::pair<std::string, Term>> bindings) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::InstanceRef;
  n->name = std::move(rule);
  for (auto& [var, t] : bindings) {
    n->names.push_back(var);
    n->args.push_back(std::move(t));
  }
  n->ground = all_ground(n->args);
  return Term(std::move(n));
}

Term::Kind Term::kind() const { return node_->kind; }
const Value& Term::value() const { return node_->value; }
const std::string& Term::name() const { return node_->name; }
std::span<const Term> Term::args() const { return node_->args; }
std::span<const Assertion> Term::conditions() const { return node_->conds; }
std::span<const std::string> Term::binding_names() const { return node_->names; }
bool Term::is_ground() const { return node_->ground; }

void Term::collect_variables(std::set<std::string>& out) const {
  if (node_->ground) return;
  if (node_->kind == Kind::Variable) {
    out.insert(node_->name);
    return;
  }
  for (const auto& a : node_->args) a.collect_variables(out);
  for (const auto& c : node_->conds) c.collect_variables(out);
}

Term Term::substitute(const Bindings& b) const {
  if (node_->ground || b.empty()) return *this;
  switch (node_->kind) {
    case Kind::Literal:
      return *this;
    case Kind::Variable: {
      auto it = b.find(node_->name);
      return it == b.end() ? *this : literal(it->second);
    }
    case Kind::Apply: {
      std::vector<Term> args;
      for (const auto& a : node_->args) args.push_back(a.substitute(b));
      return apply(node_->name, std::move(args));
    }
    case Kind::Conditional: {
      std::vector<Assertion> cs;
      for (const auto& c : node_->conds) cs.push_back(c.substitute(b));
      return conditional(std::move(cs), node_->args[0].substitute(b), node_->args[1].substitute(b));
    }
    case Kind::Tuple: {
      std::vector<Term> items;
      for (const auto& a : node_->args) items.push_back(a.substitute(b));
      return tuple(std::move(items));
    }
    case Kind::Quote:
      return quote(node_->conds.front().substitute(b));
    case Kind::InstanceRef: {
      std::vector<std::pair<std::string, Term>> bs;
      for (std::size_t i = 0; i < node_->args.size(); ++i)
        bs.emplace_back(node_->names[i], node_->args[i].substitute(b));
      return instance_ref(node_->name, std::move(bs));
    }
  }
  return *this;
}

std::string Term::str() const {
  switch (node_->kind) {
    case Kind::Literal:
      return node_->value.text();
    case Kind::Variable:
      return node_->name;
    case Kind::Apply: {
      if (is_builtin_op(node_->name) && node_->args.size() == 2) {
        return operand(node_->args[0]) + " " + node_->name + " " + operand(node_->args[1]);
      }
      if (node_->args.empty()) return node_->name;
      std::string s = node_->name + "(";
      for (std::size_t i = 0; i < node_->args.size(); ++i) {
        if (i) s += ",";
        s += node_->args[i].str();
      }
      return s + ")";
    }
    case Kind::Conditional: {
      std::string cond = node_->conds.empty() ? "true" : join_assertions(node_->conds, " and ");
      return "if " + cond + " then " + operand(node_->args[0]) + " else " +
             operand(node_->args[1]);
    }
    case Kind::Tuple: {
      std::string s = "(";
      for (std::size_t i = 0; i < node_->args.size(); ++i) {
        if (i) s += ",";
        s += node_->args[i].str();
      }
      return s + ")";
    }
    case Kind::Quote: {
      const auto& a = node_->conds.front();
      return "[" + a.lhs.str() + (a.negated ? " != " : " = ") + a.rhs.str() + "]";
    }
    case Kind::InstanceRef: {
      std::string s = node_->name + "[";
      for (std::size_t i = 0; i < node_->args.size(); ++i) {
        if (i) s += ",";
        s += node_->names[i] + "=" + node_->args[i].str();
      }
      return s + "]";
    }
  }
  return {};
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  if (x.kind != y.kind || x.ground != y.ground) return false;
  if (x.kind == Term::Kind::Literal) return x.value == y.value;
  return x.name == y.name && x.args == y.args && x.conds == y.conds && x.names == y.names;
}

std::string Assertion::str() const {
  if (!negated && rhs.kind() == Term::Kind::Literal && rhs.value() == Value::truth() &&
      lhs.kind() != Term::Kind::Tuple)
    return lhs.str();
  return lhs.str() + (negated ? " != " : " = ") + rhs.str();
}

std::string join_assertions(std::span<const Assertion> as, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < as.size(); ++i) {
    if (i) s += sep;
    s += as[i].str();
  }
  return s;
}

}  // namespace sps
