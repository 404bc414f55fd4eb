#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sps/engine.hpp"

namespace sps {

struct GroupSpec {
  std::string name;
  // Empty: all instances of the schema `name` fire together.
  std::vector<std::string> members;
};

struct StrategySpec {
  std::vector<std::string> constants;
  std::vector<GroupSpec> groups;
  std::vector<std::pair<std::string, std::string>> preferences;  // (r, r'): r preferred over r'
  std::vector<std::pair<std::string, std::string>> orders;       // (r', r): r only after r'

  bool empty() const { return constants.empty() && groups.empty() && preferences.empty() && orders.empty(); }
};

// Unknown ids, reflexive pairs, preference or order cycles.
std::vector<Diagnostic> validate_strategy(const SPS& sps, const StrategySpec& spec);

// `a1..an -> t1 = t2` becomes `-> t1 = if a1 and .. and an then t2 else t1`.
// Tuple consequents get one conditional per component.
Rule rewrite_no_precondition(const Rule& r);

// Both rules in no-precondition form, consequents paired into one tuple.
// The result keeps r's id.
Rule attach(const Rule& r, const Rule& r2);

// Every non-constant rule keeps its antecedent and carries the rewritten
// constant consequents along. With no other rules, the constants form one
// always-triggered group.
SPS apply_constant_rules(const SPS& sps, const std::vector<std::string>& constants);

// All members' conditions and writes are taken against the pre-state and
// committed together.
Rule group_finite(const std::string& id, const std::vector<Rule>& rs);
Rule group_schema(const Rule& r, const Structure& s);
SPS apply_groups(const SPS& sps, const std::vector<GroupSpec>& groups);

// Adds Applicable(RuleC) -> Bool. Each step starts by resetting Applicable(r)
// to true and then running `not a_i -> Applicable(r) = false`; r' is guarded
// by Applicable(r) = false.
SPS apply_preference(const SPS& sps, const std::vector<std::pair<std::string, std::string>>& pairs);

// Adds persistent Applied(RuleC) -> Bool, initially false. r' also writes
// Applied(r') = true; r additionally requires it and writes Applied(r) = true.
// Rules are reordered so later rules in the order are tried first.
SPS apply_ordering(const SPS& sps, const std::vector<std::pair<std::string, std::string>>& pairs);

// groups, then preference, then ordering, then constants. Throws
// InvalidStrategy on the first validate_strategy() diagnostic.
SPS lower(const SPS& sps, const StrategySpec& spec);

}  // namespace sps
