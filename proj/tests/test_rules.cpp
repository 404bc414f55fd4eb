#include <gtest/gtest.h>

#include <random>

#include "helpers.hpp"
#include "sps/encodings/encodings.hpp"
#include "sps/error.hpp"
#include "sps/rules.hpp"

using namespace sps;

namespace {

dsl::Program door(std::size_t n = 2) { return dsl::load(enc::door_sps_text(n)); }

bool has_diag(const std::vector<Diagnostic>& ds, const std::string& inv) {
  for (const auto& d : ds)
    if (d.invariant == inv) return true;
  return false;
}

}  // namespace

TEST(Grounding, InstanceIdsAndSubstitution) {
  auto p = door();
  const Structure& s = *p.sps.structure;
  const Rule& r = p.sps.rules[0];
  EXPECT_EQ(r.id, "close_open");
  Rule g = ground_instance(r, {{"x", at("door_2")}}, s);
  EXPECT_TRUE(g.is_ground());
  EXPECT_EQ(g.id, "close_open[x=door_2]");
  EXPECT_EQ(g.consequent.str(), "Status(door_2) = c");
}

TEST(Grounding, InvalidAssignments) {
  auto p = door();
  const Structure& s = *p.sps.structure;
  const Rule& r = p.sps.rules[0];
  for (const Bindings& b : {Bindings{}, Bindings{{"x", at("o")}}, Bindings{{"x", at("door_1")}, {"y", at("o")}}}) {
    try {
      ground_instance(r, b, s);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidAssignment);
    }
  }
}

TEST(Grounding, EnumerationFollowsConceptOrder) {
  auto p = dsl::load(R"(
    individual a, b, c;
    concept C = {c, a, b};
    operator F(C) -> C;
    schema r: F(x) = y -> F(y) = x where x: C, y: C;
  )");
  const Structure& s = *p.sps.structure;
  auto as = enumerate_assignments(p.sps.rules[0], s);
  ASSERT_EQ(as.size(), 9u);
  EXPECT_EQ(instance_id(p.sps.rules[0], as[0]), "r[x=c,y=c]");
  EXPECT_EQ(instance_id(p.sps.rules[0], as[1]), "r[x=c,y=a]");
  EXPECT_EQ(instance_id(p.sps.rules[0], as[8]), "r[x=b,y=b]");
}

TEST(Grounding, EmptyConceptHasNoInstances) {
  auto p = dsl::load(R"(
    concept E = {};
    operator F(E) -> Bool;
    schema r: F(x) -> F(x) = false where x: E;
  )");
  EXPECT_TRUE(enumerate_instances(p.sps.rules[0], *p.sps.structure).empty());
}

TEST(Grounding, OpenConceptRefusesEnumeration) {
  auto p = dsl::load(R"(
    operator t -> Real;
    schema r: t = v -> t = v + 1 where v: Real;
  )");
  try {
    enumerate_instances(p.sps.rules[0], *p.sps.structure);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InfiniteConcept);
  }
  WorldState w;
  w.set(key("t"), num(4));
  auto m = match(p.sps.rules[0], w, *p.sps.structure);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0].at("v"), num(4));
}

TEST(Triggering, DoorExample) {
  auto p = door();
  const Structure& s = *p.sps.structure;
  WorldState w = p.sps.initial;
  Rule g = ground_instance(p.sps.rules[0], {{"x", at("door_1")}}, s);
  EXPECT_FALSE(is_triggered(g, w, s));
  w.set(key("Do", {Value::compound("Close", {at("door_1")})}), Value::truth());
  EXPECT_TRUE(is_triggered(g, w, s));
  try {
    is_triggered(p.sps.rules[0], w, s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonGround);
  }
}

TEST(Validation, RuleDiagnostics) {
  auto p = door();
  const Structure& s = *p.sps.structure;
  Rule r = p.sps.rules[0];
  r.declarations.clear();
  EXPECT_TRUE(has_diag(validate_rule(r, s), "undeclared-variable"));
  Rule dup = p.sps.rules[0];
  dup.declarations.push_back({"x", "Door"});
  EXPECT_TRUE(has_diag(validate_rule(dup, s), "duplicate-variable"));
  Rule unk = p.sps.rules[0];
  unk.declarations[0].concept_name = "Nope";
  EXPECT_TRUE(has_diag(validate_rule(unk, s), "unknown-concept"));
  Rule bad = p.sps.rules[0];
  bad.consequent = Assertion(Term::individual("o"), Term::individual("c"));
  EXPECT_TRUE(has_diag(validate_rule(bad, s), "assignable-lhs"));
  EXPECT_TRUE(validate_rule(p.sps.rules[0], s).empty());
}

TEST(Validation, ConsequentOnlyVariablesAllowed) {
  auto p = dsl::load(enc::emit_axiom_system(enc::parse_axiom_system(slurp(fixture("descriptions/lem.axioms.json")))));
  EXPECT_TRUE(validate_sps(p.sps).empty());
}

// Property: match() equals filtering every instance through is_triggered(),
// and first_match() is its least element, on random door states.
TEST(Properties, MatchAgreesWithGrounding) {
  auto p = door(3);
  const Structure& s = *p.sps.structure;
  std::mt19937_64 rng(11);
  std::vector<Value> doors{at("door_1"), at("door_2"), at("door_3")};
  for (int trial = 0; trial < 200; ++trial) {
    WorldState w;
    for (const auto& d : doors) {
      int k = static_cast<int>(rng() % 3);
      if (k < 2) w.set(key("Status", {d}), at(k ? "c" : "o"));
      if (rng() % 2) w.set(key("Do", {Value::compound(rng() % 2 ? "Close" : "Open", {d})}), Value::truth());
    }
    for (const auto& r : p.sps.rules) {
      std::vector<std::string> expected;
      for (const auto& b : enumerate_assignments(r, s))
        if (is_triggered(ground_instance(r, b, s), w, s)) expected.push_back(instance_id(r, b));
      std::vector<std::string> got;
      for (const auto& b : match(r, w, s)) got.push_back(instance_id(r, b));
      EXPECT_EQ(got, expected);
      auto f = first_match(r, w, s);
      EXPECT_EQ(f.has_value(), !expected.empty());
      if (f) EXPECT_EQ(instance_id(r, *f), expected.front());
    }
  }
}

// Same property where the matcher must split concatenations.
TEST(Properties, ConcatMatchAgreesWithGrounding) {
  auto p = dsl::load(R"(
    individual a, b, S;
    concept Sym = strings {a, b, S} max 3;
    concept Ter = strings {a, b} max 3;
    operator cs -> Sym;
    schema r: cs = s ++ S ++ s2 -> cs = s ++ "a S" ++ s2 where s: Ter, s2: Sym;
    schema any: cs = s ++ S ++ s2 -> cs = s ++ s2 where s: Sym, s2: Sym;
  )");
  const Structure& s = *p.sps.structure;
  auto forms = s.find_concept("Sym")->members();
  for (const auto& f : forms) {
    WorldState w;
    w.set(key("cs"), f);
    for (const auto& r : p.sps.rules) {
      std::vector<std::string> expected;
      for (const auto& b : enumerate_assignments(r, s))
        if (is_triggered(ground_instance(r, b, s), w, s)) expected.push_back(instance_id(r, b));
      std::vector<std::string> got;
      for (const auto& b : match(r, w, s)) got.push_back(instance_id(r, b));
      EXPECT_EQ(got, expected) << f.text();
    }
  }
}
