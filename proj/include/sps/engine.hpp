#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sps/rules.hpp"

namespace sps {

// A production system <S, R>.
//
// `prelude` holds rule groups run at the start of every step, before the
// triggered set is computed; all triggered instances of a group fire
// together. Strategy lowering uses it to reset and recompute per-step flags.
// `probability` marks systems whose trace reports Pr(cd).
struct SPS {
  std::shared_ptr<const Structure> structure;
  std::vector<Rule> rules;
  std::vector<std::vector<Rule>> prelude;
  WorldState initial;
  bool probability = false;

  const Rule* find_rule(const std::string& id) const;
};

// Structure, rule and cross-reference diagnostics for a whole system.
std::vector<Diagnostic> validate_sps(const SPS& sps);

struct Write {
  Value key;
  Value old_value;
  Value new_value;
};

// Writes a ground rule's consequent asks for, evaluated in `w`. Identical
// writes to one key are merged; differing ones throw WriteConflict. A
// component `t = if c then u else t` whose condition fails is a no-op and
// produces no write.
std::vector<std::pair<Value, Value>> consequent_writes(const Rule& g, const WorldState& w, const Structure& s);

// Commits writes, checking operator ranges; returns the entries that changed.
std::vector<Write> commit(const std::vector<std::pair<Value, Value>>& writes, WorldState& w, const Structure& s);

// Applies a triggered ground rule. Throws NotTriggered otherwise.
WorldState apply_rule(const Rule& g, const WorldState& w, const Structure& s);

struct TriggeredInstance {
  std::size_t rule_index = 0;
  Bindings bindings;
  std::string id;
};

// Triggered instances in (rule order, assignment order).
std::vector<TriggeredInstance> triggered_set(const SPS& sps, const WorldState& w);

enum class Policy { FirstMatch, SeededRandom, Scripted };

struct EngineConfig {
  Policy policy = Policy::FirstMatch;
  std::size_t max_steps = 1000;
  std::uint64_t seed = 0;
  // Scripted policy: the k-th applied instance must be an instance of rule
  // script[k] (or exactly the instance id when it contains '[').
  std::vector<std::string> script;
  // step (1-based) -> ground assertions injected for that step only.
  std::map<std::size_t, std::vector<Assertion>> events;
  // Collect per-step records (always includes the full triggered set).
  bool trace = false;
};

struct StepRecord {
  std::size_t step = 0;
  std::vector<std::string> events;
  std::vector<std::string> triggered;
  std::optional<std::string> selected;
  std::vector<Write> writes;
  std::optional<Value> pr_cd;
};

enum class HaltReason { Quiescent, StepLimit };
const char* to_string(HaltReason h);

struct RunResult {
  WorldState state;
  std::vector<std::string> derivation;
  HaltReason halt = HaltReason::Quiescent;
  std::vector<StepRecord> records;  // record 0 holds the initial valuation
};

// Stateful executor for one run.
class Engine {
 public:
  Engine(const SPS& sps, EngineConfig cfg);
  Engine(const SPS& sps, EngineConfig cfg, WorldState w0);

  // One step of the basic strategy. Returns the applied instance id, or
  // nullopt when nothing was triggered.
  std::optional<std::string> step();

  const WorldState& state() const { return state_; }
  std::size_t steps_taken() const { return step_; }
  const std::vector<std::string>& derivation() const { return derivation_; }
  const std::vector<StepRecord>& records() const { return records_; }
  // True while a later step still has scheduled events.
  bool events_pending() const;

 private:
  std::optional<TriggeredInstance> select(std::vector<TriggeredInstance>* all);

  const SPS& sps_;
  EngineConfig cfg_;
  WorldState state_;
  std::mt19937_64 rng_;
  std::size_t step_ = 0;
  std::vector<std::string> derivation_;
  std::vector<StepRecord> records_;
};

RunResult run(const SPS& sps, const EngineConfig& cfg);
RunResult run(const SPS& sps, const WorldState& w0, const EngineConfig& cfg);

// Pr(cd) in `w`, when cd is set.
std::optional<Value> current_derivation_probability(const WorldState& w);

}  // namespace sps
