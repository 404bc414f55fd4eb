#include "sps/uncertainty.hpp"

#include "sps/error.hpp"

namespace sps {

namespace {

bool reified_range(const Operator& op) {
  return op.range && (*op.range == "DerivationC" || *op.range == "RuleC" || *op.range == "AssertionC" ||
                      *op.range == "Reified");
}

Term pr(Term t) { return Term::apply("Pr", {std::move(t)}); }

}  // namespace

Term pr_term(const Term& subject, const Structure& s) {
  bool ok = false;
  switch (subject.kind()) {
    case Term::Kind::Quote:
    case Term::Kind::InstanceRef:
    case Term::Kind::Variable:
      ok = true;
      break;
    case Term::Kind::Literal: {
      const Value& v = subject.value();
      if (v.is_assertion() || v.is_conditional_assertion()) {
        ok = true;
      } else if (v.is_atom()) {
        ok = s.is_rule_reference(v.text());
      } else if (v.is_seq()) {
        ok = true;
        for (const auto& sym : v.symbols()) ok = ok && s.is_rule_reference(sym);
      }
      break;
    }
    case Term::Kind::Apply: {
      if (subject.name() == kCondAssertOp || subject.name() == kConcatOp) {
        ok = true;
      } else if (const Operator* op = s.find_operator(subject.name())) {
        ok = reified_range(*op);
      }
      break;
    }
    default:
      break;
  }
  if (!ok) throw Error(ErrorCode::Probability, "Pr subject " + subject.str() + " is not reified");
  return pr(subject);
}

Rule derivation_probability_rule() {
  Rule r;
  r.id = "derivation_probability";
  r.declarations = {{"d", "DerivationC"}, {"r", "RuleC"}, {"p", "Probability"}, {"q", "Probability"}};
  r.antecedent = {Assertion(pr(Term::variable("d")), Term::variable("p")),
                  Assertion(pr(Term::variable("r")), Term::variable("q"))};
  r.consequent = Assertion(pr(Term::apply(kConcatOp, {Term::variable("d"), Term::variable("r")})),
                           Term::apply("*", {Term::variable("p"), Term::variable("q")}));
  return r;
}

Rule bayes_rule() {
  Rule r;
  r.id = "bayes";
  r.declarations = {{"A", "AssertionC"}, {"B", "AssertionC"}, {"pba", "Real"}, {"pa", "Real"}, {"pb", "Real"}};
  Term a = Term::variable("A"), b = Term::variable("B");
  r.antecedent = {Assertion(pr(Term::apply(kCondAssertOp, {b, a})), Term::variable("pba")),
                  Assertion(pr(a), Term::variable("pa")), Assertion(pr(b), Term::variable("pb"))};
  r.consequent = Assertion(
      pr(Term::apply(kCondAssertOp, {a, b})),
      Term::apply("/", {Term::apply("*", {Term::variable("pba"), Term::variable("pa")}), Term::variable("pb")}));
  return r;
}

Rule probabilistic_rule(std::string id, std::vector<Declaration> declarations, std::vector<Assertion> antecedent,
                        Assertion consequent) {
  Rule r;
  r.id = std::move(id);
  r.declarations = std::move(declarations);
  r.antecedent = std::move(antecedent);
  r.consequent = std::move(consequent);
  return r;
}

SPS attach_probability(const SPS& sps, bool strict) {
  SPS out = sps;
  auto s = std::make_shared<Structure>(*sps.structure);
  if (!s->find_operator("cd")) s->add_operator({"cd", {}, std::string("DerivationC"), false, false});
  Term cd = Term::apply("cd");
  Value cd_key = make_key("cd", {});
  if (!out.initial.contains(cd_key)) out.initial.set(cd_key, Value::seq({}));
  Value start = out.initial.get(cd_key);
  if (!out.initial.contains(make_key("Pr", {start}))) out.initial.set(make_key("Pr", {start}), Value::real(1.0));
  for (auto& r : out.rules) {
    Value key = make_key("Pr", {Value::atom(r.id)});
    if (!out.initial.contains(key)) {
      if (strict) throw Error(ErrorCode::Probability, "rule " + r.id + " has no probability annotation");
      out.initial.set(key, Value::real(1.0));
    }
    Term id = Term::individual(r.id);
    Term extended = Term::apply(kConcatOp, {cd, id});
    r.consequent = Assertion(Term::tuple({r.consequent.lhs, cd, pr(extended)}),
                             Term::tuple({r.consequent.rhs, extended, Term::apply("*", {pr(cd), pr(id)})}));
  }
  out.structure = s;
  out.probability = true;
  return out;
}

double derivation_probability(const std::vector<std::string>& rule_ids, const WorldState& w) {
  double p = 1.0;
  for (const auto& id : rule_ids) {
    const Value& v = w.get(make_key("Pr", {Value::atom(id)}));
    if (!v.is_real()) throw Error(ErrorCode::Probability, "rule " + id + " has no probability");
    p *= v.as_real();
  }
  return p;
}

}  // namespace sps
