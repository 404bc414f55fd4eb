#include "sps/dsl/build.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <type_traits>

#include "sps/dsl/parser.hpp"
#include "sps/error.hpp"
#include "sps/uncertainty.hpp"

namespace sps::dsl {

namespace {

using Scope = std::set<std::string>;

class Builder {
 public:
  explicit Builder(const std::string& name) : name_(name), s_(std::make_shared<Structure>()) {}

  Program run(const Document& doc) {
    for (const auto& item : doc.items) declare(item);
    for (const auto& item : doc.items)
      if (auto* c = std::get_if<ConceptDecl>(&item)) concept_decl(*c);
    for (const auto& item : doc.items) std::visit([this](const auto& d) { body(d); }, item);
    p_.sps.structure = s_;
    return std::move(p_);
  }

 private:
  [[noreturn]] void fail(Pos p, const std::string& msg) const {
    throw Error(ErrorCode::Parse,
                name_ + ":" + std::to_string(p.line) + ":" + std::to_string(p.col) + ": " + msg);
  }

  void declare(const Item& item) {
    if (auto* d = std::get_if<IndividualDecl>(&item)) {
      for (const auto& n : d->names) s_->add_individual(n);
    } else if (auto* o = std::get_if<OperatorDecl>(&item)) {
      s_->add_operator({o->name, o->domain, o->range, o->constructor, false});
    } else if (auto* r = std::get_if<RuleDecl>(&item)) {
      s_->add_rule_id(r->id);
    } else if (auto* g = std::get_if<GroupDecl>(&item)) {
      if (!g->members.empty()) s_->add_rule_id(g->name);
    }
  }

  Value member_value(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::Ident:
        if (s_->has_individual(e.name) || s_->has_rule_id(e.name)) return Value::atom(e.name);
        fail(e.pos, "unknown individual '" + e.name + "'");
      case Expr::Kind::Number:
        return Value::real(e.number);
      case Expr::Kind::String:
        return Value::seq(e.symbols);
      case Expr::Kind::Call: {
        const Operator* op = s_->find_operator(e.name);
        if (!op || !op->constructor) fail(e.pos, "'" + e.name + "' is not a constructor");
        if (op->arity() != e.args.size())
          fail(e.pos, "constructor " + e.name + " expects " + std::to_string(op->arity()) + " arguments");
        std::vector<Value> args;
        for (const auto& a : e.args) args.push_back(member_value(a));
        return Value::compound(e.name, std::move(args));
      }
      default:
        fail(e.pos, "concept members must be individuals, numbers, strings or constructor terms");
    }
  }

  void concept_decl(const ConceptDecl& d) {
    switch (d.form) {
      case ConceptDecl::Form::Set: {
        std::vector<Value> members;
        for (const auto& m : d.members) members.push_back(member_value(m));
        s_->add_concept(Concept::explicit_set(d.name, std::move(members)));
        break;
      }
      case ConceptDecl::Form::Strings:
        s_->add_concept(Concept::strings(d.name, d.alphabet, d.bound));
        break;
      case ConceptDecl::Form::Formulas: {
        std::vector<Concept::Connective> conns;
        for (const auto& [c, n] : d.connectives) conns.push_back({c, n});
        s_->add_concept(Concept::formulas(d.name, d.alphabet, std::move(conns), d.bound));
        break;
      }
    }
  }

  void type_check(const Operator& op, const std::vector<Term>& args, const std::vector<Expr>& exprs) {
    for (std::size_t i = 0; i < args.size() && i < op.domain.size(); ++i) {
      if (args[i].kind() != Term::Kind::Literal || !args[i].value().is_atom()) continue;
      const Concept* c = s_->find_concept(op.domain[i]);
      if (c && c->kind() == Concept::Kind::Explicit && !c->contains(args[i].value(), *s_))
        fail(exprs[i].pos, "type mismatch: " + args[i].value().text() + " is not in " + op.domain[i] +
                               " (argument " + std::to_string(i + 1) + " of " + op.name + ")");
    }
  }

  Term resolve(const Expr& e, const Scope& scope) {
    switch (e.kind) {
      case Expr::Kind::Ident: {
        if (scope.count(e.name)) return Term::variable(e.name);
        if (s_->has_individual(e.name)) return Term::individual(e.name);
        if (const Operator* op = s_->find_operator(e.name)) {
          if (op->arity() != 0)
            fail(e.pos, "operator " + e.name + " expects " + std::to_string(op->arity()) + " arguments");
          return Term::apply(e.name);
        }
        if (s_->has_rule_id(e.name)) return Term::individual(e.name);
        if (s_->find_concept(e.name)) fail(e.pos, "concept " + e.name + " cannot be used as a term");
        fail(e.pos, "unresolved name '" + e.name + "' (not a declared variable, individual, operator or rule)");
      }
      case Expr::Kind::Call: {
        const Operator* op = s_->find_operator(e.name);
        if (!op || is_builtin_op(e.name)) fail(e.pos, "unknown operator '" + e.name + "'");
        if (op->arity() != e.args.size())
          fail(e.pos, "operator " + e.name + " expects " + std::to_string(op->arity()) + " arguments, got " +
                          std::to_string(e.args.size()));
        std::vector<Term> args;
        for (const auto& a : e.args) args.push_back(resolve(a, scope));
        type_check(*op, args, e.args);
        return Term::apply(e.name, std::move(args));
      }
      case Expr::Kind::Number:
        return Term::real(e.number);
      case Expr::Kind::String:
        return Term::literal(Value::seq(e.symbols));
      case Expr::Kind::Infix:
        return Term::apply(e.name, {resolve(e.args[0], scope), resolve(e.args[1], scope)});
      case Expr::Kind::Cond: {
        std::vector<Assertion> conds;
        for (const auto& c : e.conds) conds.push_back(resolve(c, scope));
        return Term::conditional(std::move(conds), resolve(e.args[0], scope), resolve(e.args[1], scope));
      }
      case Expr::Kind::Tuple: {
        std::vector<Term> items;
        for (const auto& a : e.args) items.push_back(resolve(a, scope));
        return Term::tuple(std::move(items));
      }
      case Expr::Kind::Quote:
        return Term::quote(resolve(e.conds.front(), scope));
      case Expr::Kind::InstRef: {
        if (!s_->has_rule_id(e.name)) fail(e.pos, "unknown rule '" + e.name + "'");
        std::vector<std::pair<std::string, Term>> bs;
        for (std::size_t i = 0; i < e.args.size(); ++i) bs.emplace_back(e.names[i], resolve(e.args[i], scope));
        return Term::instance_ref(e.name, std::move(bs));
      }
    }
    fail(e.pos, "unsupported term");
  }

  Assertion resolve(const AssertionExpr& a, const Scope& scope) {
    Term lhs = resolve(a.lhs, scope);
    if (!a.rhs) return Assertion::truth(std::move(lhs));
    return Assertion(std::move(lhs), resolve(*a.rhs, scope), a.negated);
  }

  void assign(const AssertionExpr& a, const std::string& what) {
    Assertion f = resolve(a, {});
    if (f.negated) fail(a.pos, what + " facts must be equalities");
    if (!is_assignable(f.lhs, *s_) || f.lhs.kind() != Term::Kind::Apply)
      fail(a.pos, what + " fact " + f.lhs.str() + " is not an assignable term");
    try {
      Value key = eval_key(f.lhs, p_.sps.initial, *s_);
      p_.sps.initial.set(key, eval_term(f.rhs, p_.sps.initial, *s_));
    } catch (const Error& err) {
      fail(a.pos, err.what());
    }
  }

  void body(const IndividualDecl&) {}
  void body(const ConceptDecl&) {}
  void body(const OperatorDecl&) {}

  void body(const RuleDecl& d) {
    Rule r;
    r.id = d.id;
    Scope scope;
    for (const auto& v : d.where) {
      if (!s_->find_concept(v.concept_name)) fail(v.pos, "unknown concept '" + v.concept_name + "'");
      if (!scope.insert(v.var).second) fail(v.pos, "variable " + v.var + " declared twice");
      r.declarations.push_back({v.var, v.concept_name});
    }
    for (const auto& a : d.antecedent) r.antecedent.push_back(resolve(a, scope));
    r.consequent = resolve(d.consequent, scope);
    if (!is_assignable(r.consequent.lhs, *s_))
      fail(d.consequent.pos, "consequent lhs " + r.consequent.lhs.str() + " is not an assignable term");
    p_.sps.rules.push_back(std::move(r));
  }

  void body(const ConstantDecl& d) {
    p_.strategy.constants.insert(p_.strategy.constants.end(), d.ids.begin(), d.ids.end());
  }
  void body(const GroupDecl& d) { p_.strategy.groups.push_back({d.name, d.members}); }
  void body(const PreferDecl& d) { p_.strategy.preferences.emplace_back(d.better, d.worse); }
  void body(const OrderDecl& d) { p_.strategy.orders.emplace_back(d.first, d.second); }

  void body(const PrDecl& d) {
    if (d.value < 0.0 || d.value > 1.0) fail(d.pos, "probability " + format_real(d.value) + " is outside [0, 1]");
    Term subject = resolve(d.subject, {});
    try {
      Term key_term = pr_term(subject, *s_);
      Value key = eval_key(key_term, p_.sps.initial, *s_);
      p_.sps.initial.set(key, Value::real(d.value));
    } catch (const Error& err) {
      fail(d.pos, err.what());
    }
  }

  void body(const InitDecl& d) {
    for (const auto& f : d.facts) assign(f, "init");
  }

  void body(const EventsDecl& d) {
    for (const auto& st : d.steps) {
      auto& list = p_.config.events[st.step];
      for (const auto& f : st.facts) {
        Assertion a = resolve(f, {});
        if (a.negated || !is_assignable(a.lhs, *s_) || a.lhs.kind() != Term::Kind::Apply)
          fail(f.pos, "event " + print_assertion(f) + " must assign an operator application");
        list.push_back(std::move(a));
      }
    }
  }

  void body(const ConfigDecl& d) {
    for (const auto& e : d.entries) {
      auto on_off = [&]() {
        if (e.value == "on" || e.value == "true") return true;
        if (e.value == "off" || e.value == "false") return false;
        fail(e.pos, "config " + e.key + " expects on or off");
      };
      auto number = [&]() -> unsigned long long {
        if (e.value.empty() || e.value.find_first_not_of("0123456789") != std::string::npos)
          fail(e.pos, "config " + e.key + " expects a non-negative integer");
        return std::stoull(e.value);
      };
      if (e.key == "max_steps") {
        p_.config.max_steps = number();
        if (p_.config.max_steps == 0) fail(e.pos, "max_steps must be at least 1");
      } else if (e.key == "seed") {
        p_.config.seed = number();
      } else if (e.key == "policy") {
        if (e.value == "first") p_.config.policy = Policy::FirstMatch;
        else if (e.value == "random") p_.config.policy = Policy::SeededRandom;
        else if (e.value == "script") p_.config.policy = Policy::Scripted;
        else fail(e.pos, "policy must be first, random or script");
      } else if (e.key == "probability") {
        p_.probability = on_off();
      } else if (e.key == "strict_pr") {
        p_.strict_pr = on_off();
      } else if (e.key == "strategy") {
        if (e.value == "basic") p_.transformed = false;
        else if (e.value == "transformed") p_.transformed = true;
        else fail(e.pos, "strategy must be basic or transformed");
      } else {
        fail(e.pos, "unknown config key '" + e.key + "'");
      }
    }
  }

  const std::string& name_;
  std::shared_ptr<Structure> s_;
  Program p_;
};

}  // namespace

Program build(const Document& doc, const std::string& source_name) { return Builder(source_name).run(doc); }

Program load(std::string_view text, const std::string& source_name) {
  return build(parse(text, source_name), source_name);
}

Program load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Parse, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load(ss.str(), path);
}

SPS prepare(const Program& p, bool transformed) {
  SPS out = p.sps;
  if (transformed) out = lower(out, p.strategy);
  if (p.probability) out = attach_probability(out, p.strict_pr);
  return out;
}

std::vector<Diagnostic> check(const Program& p) {
  auto out = validate_sps(p.sps);
  auto more = validate_strategy(p.sps, p.strategy);
  out.insert(out.end(), more.begin(), more.end());
  return out;
}

}  // namespace sps::dsl
