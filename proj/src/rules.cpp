#include "sps/rules.hpp"

#include <algorithm>
#include <unordered_map>
#include <map>
#include <set>

#include "sps/error.hpp"

namespace sps {

std::string Rule::str() const {
  std::string out = id + ": ";
  if (!antecedent.empty()) out += join_assertions(antecedent, ", ") + " ";
  out += "-> " + consequent.str();
  for (std::size_t i = 0; i < declarations.size(); ++i) {
    out += i ? ", " : " where ";
    out += declarations[i].var + ": " + declarations[i].concept_name;
  }
  return out;
}

std::string instance_id(const Rule& r, const Bindings& eta) {
  if (r.declarations.empty()) return r.id;
  std::string out = r.id + "[";
  for (std::size_t i = 0; i < r.declarations.size(); ++i) {
    if (i) out += ",";
    const auto& var = r.declarations[i].var;
    auto it = eta.find(var);
    out += var + "=" + (it == eta.end() ? std::string("?") : it->second.text());
  }
  return out + "]";
}

namespace {

const Concept& declared_concept(const Declaration& d, const Structure& s) {
  const Concept* c = s.find_concept(d.concept_name);
  if (!c)
    throw Error(ErrorCode::InvalidRule, "unknown concept " + d.concept_name + " for variable " + d.var);
  return *c;
}

Rule substitute_rule(const Rule& r, const Bindings& eta) {
  Rule g;
  g.id = instance_id(r, eta);
  for (const auto& a : r.antecedent) g.antecedent.push_back(a.substitute(eta));
  g.consequent = r.consequent.substitute(eta);
  return g;
}

bool is_fluent_apply(const Term& t, const Structure& s) {
  if (t.kind() != Term::Kind::Apply || is_builtin_op(t.name())) return false;
  const Operator* op = s.find_operator(t.name());
  return op && !op->constructor;
}

class Matcher {
 public:
  Matcher(const Rule& r, const WorldState& w, const Structure& s, bool min_mode)
      : rule_(r), w_(w), s_(s), min_mode_(min_mode) {
    for (const auto& d : r.declarations) concepts_[d.var] = &declared_concept(d, s);
  }

  void run() { solve(rule_.antecedent, {}); }

  // Sorts by per-variable rank: each variable's distinct values are ordered
  // once, which is much cheaper than comparing formulas or strings pairwise.
  std::vector<Bindings> results() {
    const auto& decls = rule_.declarations;
    std::vector<std::vector<std::size_t>> keys(results_.size(), std::vector<std::size_t>(decls.size()));
    for (std::size_t d = 0; d < decls.size(); ++d) {
      std::unordered_map<std::string, std::size_t> rank;
      std::vector<Value> distinct;
      for (const auto& b : results_) {
        const Value& v = b.at(decls[d].var);
        if (rank.emplace(v.text(), 0).second) distinct.push_back(v);
      }
      const Concept* c = concepts_.at(decls[d].var);
      std::sort(distinct.begin(), distinct.end(), [c](const Value& x, const Value& y) {
        auto cmp = c->compare(x, y);
        return cmp != 0 ? cmp < 0 : x < y;
      });
      for (std::size_t i = 0; i < distinct.size(); ++i) rank[distinct[i].text()] = i;
      for (std::size_t i = 0; i < results_.size(); ++i) keys[i][d] = rank.at(results_[i].at(decls[d].var).text());
    }
    std::vector<std::size_t> order(results_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
    order.erase(std::unique(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a] == keys[b]; }),
                order.end());
    std::vector<Bindings> out;
    out.reserve(order.size());
    for (std::size_t i : order) out.push_back(std::move(results_[i]));
    return out;
  }

  std::optional<Bindings> best() const { return best_; }

 private:
  bool bind(Bindings& b, const std::string& var, const Value& v) const {
    if (auto it = b.find(var); it != b.end()) return it->second == v;
    auto c = concepts_.find(var);
    if (c == concepts_.end() || !c->second->contains(v, s_)) return false;
    b.emplace(var, v);
    return true;
  }

  bool can_unify(const Term& t, bool syntactic) const {
    if (t.is_ground()) return true;
    switch (t.kind()) {
      case Term::Kind::Variable:
        return true;
      case Term::Kind::Tuple:
        return std::all_of(t.args().begin(), t.args().end(),
                           [&](const Term& a) { return can_unify(a, syntactic); });
      case Term::Kind::Quote: {
        const Assertion& a = t.conditions().front();
        return can_unify(a.lhs, true) && can_unify(a.rhs, true);
      }
      case Term::Kind::Apply: {
        if (!syntactic) {
          if (is_arithmetic_op(t.name())) return false;
          if (!is_builtin_op(t.name()) && !s_.find_operator(t.name())) return false;
        }
        return std::all_of(t.args().begin(), t.args().end(),
                           [&](const Term& a) { return can_unify(a, syntactic); });
      }
      default:
        return false;
    }
  }

  void unify_list(std::span<const Term> ps, std::span<const Value> vs, const Bindings& b,
                  std::vector<Bindings>& out, bool syntactic) const {
    if (ps.size() != vs.size()) return;
    std::vector<Bindings> cur{b};
    for (std::size_t i = 0; i < ps.size() && !cur.empty(); ++i) {
      std::vector<Bindings> next;
      for (const auto& c : cur) unify(ps[i], vs[i], c, next, syntactic);
      cur = std::move(next);
    }
    for (auto& c : cur) out.push_back(std::move(c));
  }

  // Appends every extension of `b` under which `p` denotes `v`.
  void unify(const Term& p, const Value& v, const Bindings& b, std::vector<Bindings>& out,
             bool syntactic) const {
    Term t = p.substitute(b);
    if (t.is_ground()) {
      Value pv = syntactic ? syntax_value(t) : eval_term(t, w_, s_);
      if (pv == v) out.push_back(b);
      return;
    }
    switch (t.kind()) {
      case Term::Kind::Variable: {
        Bindings nb = b;
        if (bind(nb, t.name(), v)) out.push_back(std::move(nb));
        return;
      }
      case Term::Kind::Tuple:
        if (v.is_tuple()) unify_list(t.args(), v.args(), b, out, syntactic);
        return;
      case Term::Kind::Quote: {
        const Assertion& a = t.conditions().front();
        if (!v.is_assertion() || (v.head() == "!=") != a.negated) return;
        std::vector<Term> sides{a.lhs, a.rhs};
        unify_list(sides, v.args(), b, out, true);
        return;
      }
      case Term::Kind::Apply:
        break;
      default:
        return;
    }
    const std::string& name = t.name();
    if (syntactic) {
      if (v.is_compound() && v.head() == name) unify_list(t.args(), v.args(), b, out, true);
      return;
    }
    if (name == kConcatOp) {
      if (v.is_undefined() || !(v.is_seq() || v.is_atom())) return;
      auto syms = as_sequence(v);
      for (std::size_t i = 0; i <= syms.size(); ++i) {
        std::vector<Value> parts{
            Value::seq({syms.begin(), syms.begin() + static_cast<std::ptrdiff_t>(i)}),
            Value::seq({syms.begin() + static_cast<std::ptrdiff_t>(i), syms.end()})};
        unify_list(t.args(), parts, b, out, false);
      }
      return;
    }
    if (name == kCondAssertOp) {
      if (v.is_conditional_assertion()) unify_list(t.args(), v.args(), b, out, false);
      return;
    }
    const Operator* op = s_.find_operator(name);
    if (!op || is_arithmetic_op(name)) return;
    if (op->constructor) {
      if (v.is_compound() && v.head() == name) unify_list(t.args(), v.args(), b, out, false);
      return;
    }
    for (const auto* e : w_.entries_of(name))
      if (e->value == v) unify_list(t.args(), e->key.args(), b, out, false);
  }

  struct Generator {
    int score = 0;
    std::size_t index = 0;
    bool pattern_is_lhs = true;
  };

  std::optional<Generator> pick_generator(const std::vector<Assertion>& rest) const {
    std::optional<Generator> best;
    for (std::size_t i = 0; i < rest.size(); ++i) {
      const Assertion& a = rest[i];
      if (a.negated) continue;
      bool lg = a.lhs.is_ground(), rg = a.rhs.is_ground();
      Generator g;
      g.index = i;
      if (lg != rg) {
        const Term& p = lg ? a.rhs : a.lhs;
        if (!can_unify(p, false)) continue;
        g.pattern_is_lhs = !lg;
        g.score = is_fluent_apply(p, s_) ? 2 : 1;
      } else if (is_fluent_apply(a.lhs, s_) && can_unify(a.lhs, false)) {
        g.score = 3;
      } else if (is_fluent_apply(a.rhs, s_) && can_unify(a.rhs, false)) {
        g.score = 3;
        g.pattern_is_lhs = false;
      } else {
        continue;
      }
      if (!best || g.score < best->score) best = g;
    }
    return best;
  }

  std::vector<Bindings> generate(const Assertion& a, const Generator& g, const Bindings& b) const {
    const Term& p = g.pattern_is_lhs ? a.lhs : a.rhs;
    const Term& other = g.pattern_is_lhs ? a.rhs : a.lhs;
    std::vector<Bindings> out;
    if (g.score < 3) {
      Value v = eval_term(other, w_, s_);
      if (v.is_undefined()) return out;
      unify(p, v, b, out, false);
      return out;
    }
    for (const auto* e : w_.entries_of(p.name())) {
      std::vector<Bindings> keyed;
      unify_list(p.args(), e->key.args(), b, keyed, false);
      for (const auto& k : keyed) {
        if (can_unify(other.substitute(k), false))
          unify(other, e->value, k, out, false);
        else
          out.push_back(k);
      }
    }
    return out;
  }

  const std::vector<Value>& members_of(const std::string& var) {
    const Concept* c = concepts_.at(var);
    auto it = members_cache_.find(c->name());
    if (it != members_cache_.end()) return it->second;
    if (!c->enumerable())
      throw Error(ErrorCode::InfiniteConcept, "variable " + var + " of rule " + rule_.id +
                                                  " ranges over non-enumerable concept " + c->name());
    return members_cache_.emplace(c->name(), c->members()).first->second;
  }

  void record(const Bindings& b) {
    if (!min_mode_) {
      results_.push_back(b);
    } else if (!best_ || assignment_less(rule_, b, *best_, s_)) {
      best_ = b;
    }
  }

  // Enumerates the unbound variables in declaration order; in min mode stops
  // at the first success, which is the least completion of `b`.
  bool complete(const std::vector<Assertion>& rest, Bindings& b, std::size_t decl) {
    while (decl < rule_.declarations.size() && b.count(rule_.declarations[decl].var)) ++decl;
    if (decl == rule_.declarations.size()) {
      for (const auto& a : rest)
        if (!holds(a.substitute(b), w_, s_)) return false;
      record(b);
      return true;
    }
    const std::string& var = rule_.declarations[decl].var;
    for (const auto& m : members_of(var)) {
      b[var] = m;
      bool ok = complete(rest, b, decl + 1);
      if (ok && min_mode_) {
        b.erase(var);
        return true;
      }
    }
    b.erase(var);
    return false;
  }

  void solve(const std::vector<Assertion>& pending, const Bindings& b) {
    std::vector<Assertion> rest;
    for (const auto& a : pending) {
      Assertion g = a.substitute(b);
      if (g.is_ground()) {
        if (!holds(g, w_, s_)) return;
      } else {
        rest.push_back(std::move(g));
      }
    }
    bool positive_left = std::any_of(rest.begin(), rest.end(), [](const Assertion& a) { return !a.negated; });
    if (!positive_left) {
      Bindings nb = b;
      complete(rest, nb, 0);
      return;
    }
    if (auto g = pick_generator(rest)) {
      for (const auto& nb : generate(rest[g->index], *g, b)) solve(rest, nb);
      return;
    }
    // Nothing constrains the remaining variables structurally: enumerate the
    // smallest concept among them.
    std::set<std::string> vars;
    for (const auto& a : rest)
      if (!a.negated) a.collect_variables(vars);
    std::string pick;
    std::size_t pick_size = 0;
    for (const auto& v : vars) {
      auto n = concepts_.at(v)->size();
      if (!n) continue;
      if (pick.empty() || *n < pick_size) {
        pick = v;
        pick_size = *n;
      }
    }
    if (pick.empty()) pick = *vars.begin();
    for (const auto& m : members_of(pick)) {
      Bindings nb = b;
      nb[pick] = m;
      solve(rest, nb);
    }
  }

  const Rule& rule_;
  const WorldState& w_;
  const Structure& s_;
  bool min_mode_;
  std::map<std::string, const Concept*> concepts_;
  std::map<std::string, std::vector<Value>> members_cache_;
  std::vector<Bindings> results_;
  std::optional<Bindings> best_;
};

}  // namespace

Rule ground_instance(const Rule& r, const Bindings& eta, const Structure& s) {
  if (eta.size() != r.declarations.size())
    throw Error(ErrorCode::InvalidAssignment, "assignment for " + r.id + " has " +
                                                  std::to_string(eta.size()) + " entries, expected " +
                                                  std::to_string(r.declarations.size()));
  for (const auto& d : r.declarations) {
    auto it = eta.find(d.var);
    if (it == eta.end())
      throw Error(ErrorCode::InvalidAssignment, "assignment for " + r.id + " misses variable " + d.var);
    if (!declared_concept(d, s).contains(it->second, s))
      throw Error(ErrorCode::InvalidAssignment,
                  it->second.text() + " is not in " + d.concept_name + " (variable " + d.var + ")");
  }
  return substitute_rule(r, eta);
}

std::vector<Bindings> enumerate_assignments(const Rule& r, const Structure& s) {
  std::vector<std::vector<Value>> domains;
  for (const auto& d : r.declarations) {
    const Concept& c = declared_concept(d, s);
    if (!c.enumerable())
      throw Error(ErrorCode::InfiniteConcept, "concept " + c.name() + " cannot be enumerated");
    domains.push_back(c.members());
    if (domains.back().empty()) return {};
  }
  std::vector<Bindings> out;
  std::vector<std::size_t> idx(domains.size(), 0);
  while (true) {
    Bindings eta;
    for (std::size_t i = 0; i < idx.size(); ++i) eta[r.declarations[i].var] = domains[i][idx[i]];
    out.push_back(std::move(eta));
    std::size_t k = idx.size();
    while (k > 0 && ++idx[k - 1] == domains[k - 1].size()) idx[--k] = 0;
    if (k == 0) break;
  }
  return out;
}

std::vector<Rule> enumerate_instances(const Rule& r, const Structure& s) {
  std::vector<Rule> out;
  for (const auto& eta : enumerate_assignments(r, s)) out.push_back(substitute_rule(r, eta));
  return out;
}

bool is_triggered(const Rule& g, const WorldState& w, const Structure& s) {
  if (!g.is_ground()) throw Error(ErrorCode::NonGround, "rule " + g.id + " is a schema");
  return holds_all(g.antecedent, w, s);
}

bool assignment_less(const Rule& r, const Bindings& a, const Bindings& b, const Structure& s) {
  for (const auto& d : r.declarations) {
    const Concept* c = s.find_concept(d.concept_name);
    const Value& x = a.at(d.var);
    const Value& y = b.at(d.var);
    auto cmp = c ? c->compare(x, y) : (x <=> y);
    if (cmp < 0) return true;
    if (cmp > 0) return false;
    if (x != y) return x < y;
  }
  return false;
}

std::vector<Bindings> match(const Rule& r, const WorldState& w, const Structure& s) {
  if (r.is_ground()) {
    if (holds_all(r.antecedent, w, s)) return {Bindings{}};
    return {};
  }
  Matcher m(r, w, s, false);
  m.run();
  return m.results();
}

std::optional<Bindings> first_match(const Rule& r, const WorldState& w, const Structure& s) {
  if (r.is_ground()) {
    if (holds_all(r.antecedent, w, s)) return Bindings{};
    return std::nullopt;
  }
  Matcher m(r, w, s, true);
  m.run();
  return m.best();
}

namespace {

class RuleChecker {
 public:
  RuleChecker(const Rule& r, const Structure& s, std::vector<Diagnostic>& out)
      : r_(r), s_(s), out_(out) {}

  void term(const Term& t) {
    switch (t.kind()) {
      case Term::Kind::Literal:
        literal(t.value());
        break;
      case Term::Kind::Variable:
        if (!declared_.count(t.name()))
          out_.push_back({"undeclared-variable", r_.id,
                          "variable " + t.name() + " in rule " + r_.id + " is not declared"});
        break;
      case Term::Kind::Apply: {
        const Operator* op = s_.find_operator(t.name());
        if (!op) {
          out_.push_back({"unknown-operator", r_.id, "rule " + r_.id + " uses unknown operator " + t.name()});
        } else if (op->name != kConcatOp && op->arity() != t.args().size()) {
          out_.push_back({"operator-arity", r_.id,
                          "operator " + t.name() + " takes " + std::to_string(op->arity()) +
                              " arguments in rule " + r_.id});
        }
        break;
      }
      case Term::Kind::InstanceRef:
        if (!s_.has_rule_id(t.name()))
          out_.push_back({"unknown-rule", r_.id, "rule " + r_.id + " refers to unknown rule " + t.name()});
        break;
      default:
        break;
    }
    for (const auto& a : t.args()) term(a);
    for (const auto& c : t.conditions()) assertion(c);
  }

  void assertion(const Assertion& a) {
    term(a.lhs);
    term(a.rhs);
  }

  void run() {
    std::set<std::string> seen;
    for (const auto& d : r_.declarations) {
      if (!seen.insert(d.var).second)
        out_.push_back({"duplicate-variable", r_.id, "variable " + d.var + " declared twice in rule " + r_.id});
      if (!s_.find_concept(d.concept_name))
        out_.push_back({"unknown-concept", r_.id,
                        "variable " + d.var + " of rule " + r_.id + " ranges over unknown concept " +
                            d.concept_name});
    }
    declared_ = seen;
    for (const auto& a : r_.antecedent) assertion(a);
    assertion(r_.consequent);
    if (r_.consequent.negated)
      out_.push_back({"consequent-form", r_.id, "consequent of rule " + r_.id + " is negated"});
    if (!is_assignable(r_.consequent.lhs, s_))
      out_.push_back({"assignable-lhs", r_.id,
                      "consequent lhs " + r_.consequent.lhs.str() + " of rule " + r_.id +
                          " is not an assignable term"});
    if (r_.consequent.lhs.kind() == Term::Kind::Tuple) {
      const Term& rhs = r_.consequent.rhs;
      if (rhs.kind() == Term::Kind::Tuple && rhs.args().size() != r_.consequent.lhs.args().size())
        out_.push_back({"consequent-form", r_.id, "tuple consequent of rule " + r_.id + " has mismatched sides"});
    }
  }

 private:
  void literal(const Value& v) {
    if (v.is_atom() && !s_.has_individual(v.text()) && !s_.is_rule_reference(v.text()))
      out_.push_back({"unknown-individual", r_.id, "rule " + r_.id + " uses unknown individual " + v.text()});
    if (v.is_real() && !s_.builtin())
      out_.push_back({"builtin-real", r_.id, "rule " + r_.id + " uses a real without builtins"});
    for (const auto& sym : v.symbols())
      if (!s_.has_individual(sym) && !s_.is_rule_reference(sym))
        out_.push_back({"unknown-individual", r_.id, "rule " + r_.id + " uses unknown symbol " + sym});
  }

  const Rule& r_;
  const Structure& s_;
  std::vector<Diagnostic>& out_;
  std::set<std::string> declared_;
};

}  // namespace

std::vector<Diagnostic> validate_rule(const Rule& r, const Structure& s) {
  std::vector<Diagnostic> out;
  RuleChecker(r, s, out).run();
  return out;
}

}  // namespace sps
