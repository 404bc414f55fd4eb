#include "sps/strategies.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "sps/error.hpp"

namespace sps {

namespace {

std::shared_ptr<Structure> copy_structure(const SPS& sps) { return std::make_shared<Structure>(*sps.structure); }

void ensure_flag_operator(Structure& s, const std::string& name) {
  if (!s.find_operator(name)) s.add_operator({name, {"RuleC"}, std::string("Bool"), false, false});
}

std::vector<Declaration> merge_declarations(const Rule& a, const Rule& b) {
  std::vector<Declaration> out = a.declarations;
  for (const auto& d : b.declarations) {
    auto it = std::find_if(out.begin(), out.end(), [&](const Declaration& x) { return x.var == d.var; });
    if (it == out.end()) {
      out.push_back(d);
    } else if (!(*it == d)) {
      throw Error(ErrorCode::InvalidStrategy,
                  "rules " + a.id + " and " + b.id + " declare variable " + d.var + " differently");
    }
  }
  return out;
}

// Appends `lhs = rhs` to r's consequent as one more tuple component.
void extend_consequent(Rule& r, const Term& lhs, const Term& rhs) {
  r.consequent = Assertion(Term::tuple({r.consequent.lhs, lhs}), Term::tuple({r.consequent.rhs, rhs}));
}

Term rule_ref(const Rule& r) {
  if (r.is_ground()) return Term::individual(r.id);
  std::vector<std::pair<std::string, Term>> bs;
  for (const auto& d : r.declarations) bs.emplace_back(d.var, Term::variable(d.var));
  return Term::instance_ref(r.id, std::move(bs));
}

Term literal_ref(const Rule& r, const Bindings& eta) {
  std::vector<std::pair<std::string, Term>> bs;
  for (const auto& d : r.declarations) bs.emplace_back(d.var, Term::literal(eta.at(d.var)));
  return Term::instance_ref(r.id, std::move(bs));
}

std::size_t rule_index(const SPS& sps, const std::string& id) {
  for (std::size_t i = 0; i < sps.rules.size(); ++i)
    if (sps.rules[i].id == id) return i;
  throw Error(ErrorCode::InvalidStrategy, "unknown rule " + id);
}

// Returns an edge on a cycle, if any.
std::optional<std::pair<std::string, std::string>> find_cycle(
    const std::vector<std::pair<std::string, std::string>>& edges) {
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& [a, b] : edges) adj[a].push_back(b);
  std::map<std::string, int> color;
  std::optional<std::pair<std::string, std::string>> found;
  std::function<void(const std::string&)> dfs = [&](const std::string& u) {
    color[u] = 1;
    for (const auto& v : adj[u]) {
      if (found) return;
      if (color[v] == 1) {
        found = std::make_pair(u, v);
        return;
      }
      if (color[v] == 0) dfs(v);
    }
    color[u] = 2;
  };
  for (const auto& [u, _] : adj)
    if (!found && color[u] == 0) dfs(u);
  return found;
}

}  // namespace

std::vector<Diagnostic> validate_strategy(const SPS& sps, const StrategySpec& spec) {
  std::vector<Diagnostic> out;
  std::set<std::string> ids;
  for (const auto& r : sps.rules) ids.insert(r.id);
  std::set<std::string> grouped;
  for (const auto& g : spec.groups) {
    if (g.members.empty()) {
      if (!ids.count(g.name)) out.push_back({"strategy-ids", g.name, "group refers to unknown rule " + g.name});
      continue;
    }
    for (const auto& m : g.members) {
      if (!ids.count(m)) out.push_back({"strategy-ids", m, "group " + g.name + " refers to unknown rule " + m});
      if (!grouped.insert(m).second)
        out.push_back({"strategy-ids", m, "rule " + m + " belongs to more than one group"});
    }
    ids.insert(g.name);
  }
  for (const auto& c : spec.constants)
    if (!ids.count(c)) out.push_back({"strategy-ids", c, "constant refers to unknown rule " + c});
  auto check_pairs = [&](const std::vector<std::pair<std::string, std::string>>& pairs, const char* what) {
    for (const auto& [a, b] : pairs) {
      for (const auto& x : {a, b})
        if (!ids.count(x)) out.push_back({"strategy-ids", x, std::string(what) + " refers to unknown rule " + x});
      if (a == b) out.push_back({"irreflexive", a, std::string(what) + " relates rule " + a + " to itself"});
    }
    if (auto c = find_cycle(pairs))
      out.push_back({"acyclic", c->first,
                     std::string(what) + " relation is cyclic (through " + c->first + " and " + c->second + ")"});
  };
  check_pairs(spec.preferences, "preference");
  check_pairs(spec.orders, "order");
  return out;
}

Rule rewrite_no_precondition(const Rule& r) {
  Rule out = r;
  out.antecedent.clear();
  const Term& lhs = r.consequent.lhs;
  const Term& rhs = r.consequent.rhs;
  if (lhs.kind() == Term::Kind::Tuple && rhs.kind() == Term::Kind::Tuple && lhs.args().size() == rhs.args().size()) {
    std::vector<Term> items;
    for (std::size_t i = 0; i < lhs.args().size(); ++i)
      items.push_back(Term::conditional(r.antecedent, rhs.args()[i], lhs.args()[i]));
    out.consequent = Assertion(lhs, Term::tuple(std::move(items)));
  } else {
    out.consequent = Assertion(lhs, Term::conditional(r.antecedent, rhs, lhs));
  }
  return out;
}

Rule attach(const Rule& r, const Rule& r2) {
  Rule a = rewrite_no_precondition(r);
  Rule b = rewrite_no_precondition(r2);
  a.declarations = merge_declarations(a, b);
  extend_consequent(a, b.consequent.lhs, b.consequent.rhs);
  return a;
}

SPS apply_constant_rules(const SPS& sps, const std::vector<std::string>& constants) {
  if (constants.empty()) return sps;
  std::set<std::string> cs(constants.begin(), constants.end());
  std::vector<Rule> constant_rules;
  for (const auto& id : constants) constant_rules.push_back(rewrite_no_precondition(sps.rules[rule_index(sps, id)]));
  SPS out = sps;
  out.rules.clear();
  for (const auto& r : sps.rules) {
    if (cs.count(r.id)) continue;
    Rule x = r;
    for (const auto& c : constant_rules) {
      x.declarations = merge_declarations(x, c);
      extend_consequent(x, c.consequent.lhs, c.consequent.rhs);
    }
    out.rules.push_back(std::move(x));
  }
  if (out.rules.empty()) {
    std::string id;
    for (const auto& c : constants) id += (id.empty() ? "" : "+") + c;
    Rule g = constant_rules.front();
    g.id = id;
    for (std::size_t i = 1; i < constant_rules.size(); ++i) {
      g.declarations = merge_declarations(g, constant_rules[i]);
      extend_consequent(g, constant_rules[i].consequent.lhs, constant_rules[i].consequent.rhs);
    }
    auto s = copy_structure(sps);
    if (!s->has_rule_id(id)) s->add_rule_id(id);
    out.structure = s;
    out.rules.push_back(std::move(g));
  }
  return out;
}

Rule group_finite(const std::string& id, const std::vector<Rule>& rs) {
  std::vector<Term> lhs, rhs;
  for (const auto& r : rs) {
    if (!r.is_ground()) throw Error(ErrorCode::InvalidStrategy, "group member " + r.id + " is not ground");
    Rule w = rewrite_no_precondition(r);
    lhs.push_back(w.consequent.lhs);
    rhs.push_back(w.consequent.rhs);
  }
  Rule g;
  g.id = id;
  if (lhs.size() == 1) {
    g.consequent = Assertion(lhs.front(), rhs.front());
  } else {
    g.consequent = Assertion(Term::tuple(std::move(lhs)), Term::tuple(std::move(rhs)));
  }
  return g;
}

Rule group_schema(const Rule& r, const Structure& s) {
  auto instances = enumerate_instances(r, s);
  // Instances keep the schema id as the group's id.
  return group_finite(r.id, instances);
}

SPS apply_groups(const SPS& sps, const std::vector<GroupSpec>& groups) {
  if (groups.empty()) return sps;
  SPS out = sps;
  auto s = copy_structure(sps);
  for (const auto& g : groups) {
    if (g.members.empty()) {
      std::size_t i = rule_index(out, g.name);
      out.rules[i] = group_schema(out.rules[i], *s);
      continue;
    }
    std::vector<Rule> members;
    std::size_t pos = out.rules.size();
    for (const auto& m : g.members) {
      std::size_t i = rule_index(out, m);
      pos = std::min(pos, i);
      const Rule& r = out.rules[i];
      if (r.is_ground()) {
        members.push_back(r);
      } else {
        for (auto& inst : enumerate_instances(r, *s)) members.push_back(std::move(inst));
      }
    }
    Rule grouped = group_finite(g.name, members);
    std::set<std::string> ms(g.members.begin(), g.members.end());
    std::vector<Rule> rules;
    for (std::size_t i = 0; i < out.rules.size(); ++i) {
      if (i == pos) rules.push_back(grouped);
      if (!ms.count(out.rules[i].id)) rules.push_back(out.rules[i]);
    }
    out.rules = std::move(rules);
    if (!s->has_rule_id(g.name)) s->add_rule_id(g.name);
  }
  out.structure = s;
  return out;
}

SPS apply_preference(const SPS& sps, const std::vector<std::pair<std::string, std::string>>& pairs) {
  if (pairs.empty()) return sps;
  SPS out = sps;
  auto s = copy_structure(sps);
  ensure_flag_operator(*s, "Applicable");
  if (out.prelude.size() < 2) out.prelude.resize(2);
  std::set<std::string> flagged;
  for (const auto& [better, worse] : pairs) {
    const Rule r = out.rules[rule_index(out, better)];
    if (flagged.insert(r.id).second) {
      Term flag = Term::apply("Applicable", {rule_ref(r)});
      Rule reset;
      reset.id = "Applicable_reset_" + r.id;
      reset.declarations = r.declarations;
      reset.consequent = Assertion(flag, Term::literal(Value::truth()));
      out.prelude[0].push_back(std::move(reset));
      for (std::size_t i = 0; i < r.antecedent.size(); ++i) {
        Rule neg;
        neg.id = "Applicable_not_" + r.id + "_" + std::to_string(i + 1);
        neg.declarations = r.declarations;
        neg.antecedent = {r.antecedent[i].negation()};
        neg.consequent = Assertion(flag, Term::literal(Value::falsity()));
        out.prelude[1].push_back(std::move(neg));
      }
    }
    Rule& w = out.rules[rule_index(out, worse)];
    if (r.is_ground()) {
      w.antecedent.emplace_back(Term::apply("Applicable", {rule_ref(r)}), Term::literal(Value::falsity()));
    } else {
      for (const auto& eta : enumerate_assignments(r, *s))
        w.antecedent.emplace_back(Term::apply("Applicable", {literal_ref(r, eta)}), Term::literal(Value::falsity()));
    }
  }
  out.structure = s;
  return out;
}

SPS apply_ordering(const SPS& sps, const std::vector<std::pair<std::string, std::string>>& pairs) {
  if (pairs.empty()) return sps;
  if (auto c = find_cycle(pairs))
    throw Error(ErrorCode::InvalidStrategy, "order relation is cyclic through " + c->first + " and " + c->second);
  SPS out = sps;
  auto s = copy_structure(sps);
  ensure_flag_operator(*s, "Applied");
  auto applied = [](const std::string& id) { return Term::apply("Applied", {Term::individual(id)}); };
  for (const auto& r : out.rules) out.initial.set(make_key("Applied", {Value::atom(r.id)}), Value::falsity());

  std::set<std::string> marked;
  auto mark = [&](Rule& r) {
    if (marked.insert(r.id).second) extend_consequent(r, applied(r.id), Term::literal(Value::truth()));
  };
  for (const auto& [first, second] : pairs) {
    mark(out.rules[rule_index(out, first)]);
    Rule& r = out.rules[rule_index(out, second)];
    r.antecedent.emplace_back(applied(first), Term::literal(Value::truth()));
    mark(r);
  }

  std::map<std::string, std::size_t> depth;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [first, second] : pairs) {
      std::size_t d = depth[first] + 1;
      if (depth[second] < d) {
        depth[second] = d;
        changed = true;
      }
    }
  }
  std::stable_sort(out.rules.begin(), out.rules.end(), [&](const Rule& a, const Rule& b) {
    auto da = depth.count(a.id) ? depth.at(a.id) : 0;
    auto db = depth.count(b.id) ? depth.at(b.id) : 0;
    return da > db;
  });
  out.structure = s;
  return out;
}

SPS lower(const SPS& sps, const StrategySpec& spec) {
  auto diags = validate_strategy(sps, spec);
  if (!diags.empty()) throw Error(ErrorCode::InvalidStrategy, diags.front().message);
  SPS out = apply_groups(sps, spec.groups);
  out = apply_preference(out, spec.preferences);
  out = apply_ordering(out, spec.orders);
  return apply_constant_rules(out, spec.constants);
}

}  // namespace sps
