#include <gtest/gtest.h>

#include "criteria.hpp"

using namespace sps;

namespace {

void expect_pass(const criteria::Result& r) { EXPECT_TRUE(r.pass) << r.detail; }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidConfig;
}

const char* kCounters =
    "operator u -> Real;\noperator v -> Real;\n"
    "rule tick: -> u = u + 1;\nrule tock: -> v = v + 1;\n"
    "init {\n  u = 0;\n  v = 0;\n}\n";

}  // namespace

TEST(Rewrite, NoPreconditionShape) {
  auto p = dsl::load(enc::door_sps_text(2));
  Rule rw = rewrite_no_precondition(p.sps.rules[0]);
  EXPECT_EQ(rw.id, "close_open");
  EXPECT_TRUE(rw.antecedent.empty());
  EXPECT_EQ(rw.declarations, p.sps.rules[0].declarations);
  EXPECT_EQ(rw.consequent.lhs, p.sps.rules[0].consequent.lhs);
  ASSERT_EQ(rw.consequent.rhs.kind(), Term::Kind::Conditional);
  EXPECT_EQ(rw.consequent.rhs.conditions().size(), 2u);
  EXPECT_EQ(rw.consequent.rhs.else_term(), rw.consequent.lhs);
}

TEST(Rewrite, EquivalentOnEveryTwoDoorState) { expect_pass(criteria::rewrite_equivalence()); }

TEST(Attach, TupleOfBothConsequents) {
  auto p = dsl::load(kCounters);
  Rule r = attach(*p.sps.find_rule("tick"), *p.sps.find_rule("tock"));
  EXPECT_EQ(r.id, "tick");
  EXPECT_TRUE(r.antecedent.empty());
  EXPECT_EQ(r.consequent.lhs.kind(), Term::Kind::Tuple);
  WorldState w = apply_rule(r, p.sps.initial, *p.sps.structure);
  EXPECT_EQ(w.get(key("u")), num(1));
  EXPECT_EQ(w.get(key("v")), num(1));
}

TEST(Constant, MatchesManualAttachment) { expect_pass(criteria::constant_equivalence()); }

TEST(Constant, ClockCountsEveryStep) {
  auto p = dsl::load_file(fixture("door_clock.sps"));
  auto r = run(dsl::prepare(p, true), p.config);
  EXPECT_EQ(r.derivation.size(), 3u);
  EXPECT_EQ(r.state.get(key("t")), num(3));
  // basic strategy: tick is just another rule and never fires while doors do
  auto b = run(dsl::prepare(p, false), p.config);
  EXPECT_EQ(b.state.get(key("t")), num(0));
}

TEST(Constant, OnlyConstantsFormOneRule) {
  auto p = dsl::load(std::string(kCounters) + "constant tick, tock;\n");
  SPS low = dsl::prepare(p, true);
  ASSERT_EQ(low.rules.size(), 1u);
  EXPECT_EQ(low.rules[0].id, "tick+tock");
  EngineConfig cfg;
  cfg.max_steps = 4;
  auto r = run(low, cfg);
  EXPECT_EQ(r.state.get(key("u")), num(4));
  EXPECT_EQ(r.state.get(key("v")), num(4));
}

TEST(Group, SwapReadsPreState) {
  auto p = dsl::load_file(fixture("swap.sps"));
  auto g = run(dsl::prepare(p, true), p.config);
  EXPECT_EQ(g.state.get(key("a")), at("x1"));
  EXPECT_EQ(g.state.get(key("b")), at("x0"));
  auto b = run(dsl::prepare(p, false), p.config);
  EXPECT_EQ(b.state.get(key("a")), at("x1"));
  EXPECT_EQ(b.state.get(key("b")), at("x1"));
}

TEST(Group, DisjointWritesMatchEveryPermutation) { expect_pass(criteria::group_permutations()); }

TEST(Group, SchemaGroupFiresAllInstances) {
  auto p = dsl::load(enc::door_sps_text(4));
  p.strategy.groups.push_back({"close_open", {}});
  EngineConfig cfg;
  cfg.max_steps = 1;
  for (std::size_t d = 0; d < 4; ++d) cfg.events[1].push_back(criteria::do_event(true, criteria::door_name(d)));
  auto r = run(dsl::prepare(p, true), cfg);
  EXPECT_EQ(r.derivation.size(), 1u);
  EXPECT_EQ(criteria::closed_mask(r.state, 4), 0b1111u);
}

TEST(Group, ConflictingMembersRaise) {
  auto p = dsl::load(
      "individual x0, x1;\nconcept Cell = {x0, x1};\noperator a -> Cell;\n"
      "rule set0: -> a = x0;\nrule set1: -> a = x1;\ngroup both = set0, set1;\n");
  SPS low = dsl::prepare(p, true);
  EXPECT_EQ(code_of([&] { run(low, p.config); }), ErrorCode::WriteConflict);
}

TEST(Preference, FixturePrefersCloseThenOpens) {
  auto p = dsl::load_file(fixture("preference.sps"));
  auto r = run(dsl::prepare(p, true), p.config);
  ASSERT_EQ(r.derivation.size(), 2u);
  EXPECT_EQ(r.derivation[0], "close_open[x=door_1]");
  EXPECT_EQ(r.derivation[1], "open_2");
}

TEST(Preference, NeverFiresWhilePreferredApplicable) { expect_pass(criteria::preference_soundness()); }

TEST(Preference, CycleRejected) {
  auto p = dsl::load(std::string(kCounters) + "prefer tick over tock;\nprefer tock over tick;\n");
  EXPECT_FALSE(validate_strategy(p.sps, p.strategy).empty());
  EXPECT_FALSE(dsl::check(p).empty());
  EXPECT_EQ(code_of([&] { dsl::prepare(p, true); }), ErrorCode::InvalidStrategy);
}

TEST(Order, CountersFireInSequence) {
  auto p = dsl::load_file(fixture("ordering.sps"));
  auto r = run(dsl::prepare(p, true), p.config);
  EXPECT_EQ(r.derivation, (std::vector<std::string>{"inc_u", "inc_v", "inc_w"}));
  auto b = run(dsl::prepare(p, false), p.config);
  EXPECT_EQ(b.derivation, (std::vector<std::string>{"inc_w", "inc_w", "inc_w"}));
}

TEST(Order, NeverBeforePredecessor) { expect_pass(criteria::order_soundness()); }

TEST(Order, CycleRejected) {
  auto p = dsl::load(std::string(kCounters) + "order tick then tock;\norder tock then tick;\n");
  EXPECT_EQ(code_of([&] { dsl::prepare(p, true); }), ErrorCode::InvalidStrategy);
}

TEST(Strategy, UnknownAndReflexiveIdsRejected) {
  auto p = dsl::load(kCounters);
  StrategySpec unknown;
  unknown.preferences.push_back({"tick", "nope"});
  EXPECT_FALSE(validate_strategy(p.sps, unknown).empty());
  StrategySpec self;
  self.orders.push_back({"tick", "tick"});
  EXPECT_FALSE(validate_strategy(p.sps, self).empty());
  StrategySpec constant;
  constant.constants.push_back("nope");
  EXPECT_EQ(code_of([&] { lower(p.sps, constant); }), ErrorCode::InvalidStrategy);
}
