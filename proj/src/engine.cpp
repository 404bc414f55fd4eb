#include "sps/engine.hpp"

#include <set>

#include "sps/error.hpp"

namespace sps {

const Rule* SPS::find_rule(const std::string& id) const {
  for (const auto& r : rules)
    if (r.id == id) return &r;
  return nullptr;
}

std::vector<Diagnostic> validate_sps(const SPS& sps) {
  std::vector<Diagnostic> out = validate_structure(*sps.structure);
  std::set<std::string> ids;
  auto check = [&](const Rule& r) {
    auto ds = validate_rule(r, *sps.structure);
    out.insert(out.end(), ds.begin(), ds.end());
  };
  for (const auto& r : sps.rules) {
    if (!ids.insert(r.id).second)
      out.push_back({"unique-rule-id", r.id, "rule id " + r.id + " is declared more than once"});
    if (!sps.structure->has_rule_id(r.id))
      out.push_back({"rule-reified", r.id, "rule id " + r.id + " is not registered in the structure"});
    check(r);
  }
  for (const auto& group : sps.prelude)
    for (const auto& r : group) check(r);
  return out;
}

namespace {

class WriteSet {
 public:
  void put(const Value& key, const Value& value) {
    auto [it, inserted] = index_.emplace(key.text(), writes_.size());
    if (inserted) {
      writes_.emplace_back(key, value);
      return;
    }
    const Value& prev = writes_[it->second].second;
    if (!(prev == value))
      throw Error(ErrorCode::WriteConflict, "conflicting writes to " + key.text() + ": " + prev.text() +
                                                " and " + value.text());
  }

  void merge(const std::vector<std::pair<Value, Value>>& ws) {
    for (const auto& [k, v] : ws) put(k, v);
  }

  std::vector<std::pair<Value, Value>> take() { return std::move(writes_); }

 private:
  std::vector<std::pair<Value, Value>> writes_;
  std::map<std::string, std::size_t> index_;
};

void collect(const Term& lhs, const Term& rhs, const WorldState& w, const Structure& s, WriteSet& out) {
  const Term* r = &rhs;
  while (r->kind() == Term::Kind::Conditional) {
    if (holds_all(r->conditions(), w, s)) {
      r = &r->then_term();
    } else if (r->else_term() == lhs) {
      return;
    } else {
      r = &r->else_term();
    }
  }
  if (lhs.kind() == Term::Kind::Tuple) {
    if (r->kind() == Term::Kind::Tuple && r->args().size() == lhs.args().size()) {
      for (std::size_t i = 0; i < lhs.args().size(); ++i) collect(lhs.args()[i], r->args()[i], w, s, out);
      return;
    }
    Value v = eval_term(*r, w, s);
    if (!v.is_tuple() || v.args().size() != lhs.args().size())
      throw Error(ErrorCode::InvalidRule, "tuple consequent " + lhs.str() + " receives " + v.text());
    for (std::size_t i = 0; i < lhs.args().size(); ++i) out.put(eval_key(lhs.args()[i], w, s), v.args()[i]);
    return;
  }
  out.put(eval_key(lhs, w, s), eval_term(*r, w, s));
}

std::vector<Write> diff(const WorldState& a, const WorldState& b) {
  std::vector<Write> out;
  auto ia = a.entries().begin(), ea = a.entries().end();
  auto ib = b.entries().begin(), eb = b.entries().end();
  while (ia != ea || ib != eb) {
    if (ib == eb || (ia != ea && ia->first < ib->first)) {
      out.push_back({ia->second.key, ia->second.value, Value::undefined()});
      ++ia;
    } else if (ia == ea || ib->first < ia->first) {
      out.push_back({ib->second.key, Value::undefined(), ib->second.value});
      ++ib;
    } else {
      if (!(ia->second.value == ib->second.value))
        out.push_back({ia->second.key, ia->second.value, ib->second.value});
      ++ia;
      ++ib;
    }
  }
  return out;
}

}  // namespace

std::vector<std::pair<Value, Value>> consequent_writes(const Rule& g, const WorldState& w, const Structure& s) {
  if (!g.is_ground()) throw Error(ErrorCode::NonGround, "rule " + g.id + " is a schema");
  WriteSet out;
  collect(g.consequent.lhs, g.consequent.rhs, w, s, out);
  return out.take();
}

std::vector<Write> commit(const std::vector<std::pair<Value, Value>>& writes, WorldState& w, const Structure& s) {
  for (const auto& [key, value] : writes) {
    const Operator* op = s.find_operator(key.head());
    if (!op || !op->range) continue;
    const Concept* range = s.find_concept(*op->range);
    if (range && (value.is_undefined() || !range->contains(value, s)))
      throw Error(ErrorCode::RangeViolation,
                  "value " + value.text() + " for " + key.text() + " is outside " + *op->range);
  }
  std::vector<Write> changed;
  for (const auto& [key, value] : writes) {
    const Value& old = w.get(key);
    if (old == value) continue;
    changed.push_back({key, old, value});
    w.set(key, value);
  }
  return changed;
}

WorldState apply_rule(const Rule& g, const WorldState& w, const Structure& s) {
  if (!is_triggered(g, w, s)) throw Error(ErrorCode::NotTriggered, "rule " + g.id + " is not triggered");
  WorldState next = w;
  commit(consequent_writes(g, w, s), next, s);
  return next;
}

std::vector<TriggeredInstance> triggered_set(const SPS& sps, const WorldState& w) {
  std::vector<TriggeredInstance> out;
  for (std::size_t i = 0; i < sps.rules.size(); ++i) {
    const Rule& r = sps.rules[i];
    for (auto& eta : match(r, w, *sps.structure)) {
      std::string id = instance_id(r, eta);
      out.push_back({i, std::move(eta), std::move(id)});
    }
  }
  return out;
}

const char* to_string(HaltReason h) {
  return h == HaltReason::Quiescent ? "quiescent" : "step-limit";
}

std::optional<Value> current_derivation_probability(const WorldState& w) {
  const Value& cd = w.get(make_key("cd", {}));
  if (cd.is_undefined()) return std::nullopt;
  const Value& pr = w.get(make_key("Pr", {cd}));
  if (pr.is_undefined()) return std::nullopt;
  return pr;
}

Engine::Engine(const SPS& sps, EngineConfig cfg) : Engine(sps, std::move(cfg), sps.initial) {}

Engine::Engine(const SPS& sps, EngineConfig cfg, WorldState w0)
    : sps_(sps), cfg_(std::move(cfg)), state_(std::move(w0)), rng_(cfg_.seed) {
  if (cfg_.max_steps == 0) throw Error(ErrorCode::InvalidConfig, "max_steps must be at least 1");
  if (cfg_.trace) {
    StepRecord rec;
    rec.writes = diff(WorldState{}, state_);
    if (sps_.probability) rec.pr_cd = current_derivation_probability(state_);
    records_.push_back(std::move(rec));
  }
}

bool Engine::events_pending() const {
  return cfg_.events.upper_bound(step_) != cfg_.events.end();
}

std::optional<TriggeredInstance> Engine::select(std::vector<TriggeredInstance>* all) {
  const Structure& s = *sps_.structure;
  if (cfg_.policy == Policy::FirstMatch && !all) {
    for (std::size_t i = 0; i < sps_.rules.size(); ++i) {
      if (auto eta = first_match(sps_.rules[i], state_, s)) {
        std::string id = instance_id(sps_.rules[i], *eta);
        return TriggeredInstance{i, std::move(*eta), std::move(id)};
      }
    }
    return std::nullopt;
  }
  std::vector<TriggeredInstance> local;
  std::vector<TriggeredInstance>& list = all ? *all : local;
  list = triggered_set(sps_, state_);
  switch (cfg_.policy) {
    case Policy::FirstMatch:
      if (list.empty()) return std::nullopt;
      return list.front();
    case Policy::SeededRandom: {
      if (list.empty()) return std::nullopt;
      std::uniform_int_distribution<std::size_t> pick(0, list.size() - 1);
      return list[pick(rng_)];
    }
    case Policy::Scripted: {
      std::size_t k = derivation_.size();
      if (k >= cfg_.script.size()) return std::nullopt;
      const std::string& target = cfg_.script[k];
      bool exact = target.find('[') != std::string::npos;
      for (const auto& t : list)
        if (exact ? t.id == target : sps_.rules[t.rule_index].id == target) return t;
      throw Error(ErrorCode::NotTriggered,
                  "scripted rule " + target + " is not triggered at step " + std::to_string(step_));
    }
  }
  return std::nullopt;
}

std::optional<std::string> Engine::step() {
  const Structure& s = *sps_.structure;
  ++step_;
  StepRecord rec;
  rec.step = step_;
  WorldState before;
  if (cfg_.trace) before = state_;

  std::vector<std::pair<Value, Value>> saved;
  if (auto ev = cfg_.events.find(step_); ev != cfg_.events.end()) {
    for (const auto& a : ev->second) {
      Value key = eval_key(a.lhs, state_, s);
      Value value = eval_term(a.rhs, state_, s);
      saved.emplace_back(key, state_.get(key));
      state_.set(key, value);
      rec.events.push_back(a.str());
    }
  }

  for (const auto& group : sps_.prelude) {
    WriteSet ws;
    for (const auto& r : group)
      for (const auto& eta : match(r, state_, s)) ws.merge(consequent_writes(ground_instance(r, eta, s), state_, s));
    commit(ws.take(), state_, s);
  }

  std::vector<TriggeredInstance> all;
  auto sel = select(cfg_.trace ? &all : nullptr);
  if (sel) {
    Rule g = ground_instance(sps_.rules[sel->rule_index], sel->bindings, s);
    commit(consequent_writes(g, state_, s), state_, s);
    derivation_.push_back(sel->id);
  }

  for (auto it = saved.rbegin(); it != saved.rend(); ++it) state_.set(it->first, it->second);

  if (cfg_.trace) {
    for (const auto& t : all) rec.triggered.push_back(t.id);
    if (sel) rec.selected = sel->id;
    rec.writes = diff(before, state_);
    if (sps_.probability) rec.pr_cd = current_derivation_probability(state_);
    records_.push_back(std::move(rec));
  }
  if (!sel) return std::nullopt;
  return sel->id;
}

RunResult run(const SPS& sps, const EngineConfig& cfg) { return run(sps, sps.initial, cfg); }

RunResult run(const SPS& sps, const WorldState& w0, const EngineConfig& cfg) {
  Engine e(sps, cfg, w0);
  RunResult out;
  while (true) {
    if (e.steps_taken() >= cfg.max_steps) {
      out.halt = HaltReason::StepLimit;
      break;
    }
    if (!e.step() && !e.events_pending()) {
      out.halt = HaltReason::Quiescent;
      break;
    }
  }
  out.state = e.state();
  out.derivation = e.derivation();
  out.records = e.records();
  return out;
}

}  // namespace sps
