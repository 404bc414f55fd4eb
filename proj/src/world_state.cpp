#include "sps/world_state.hpp"

namespace sps {

const Value& WorldState::get(const Value& key) const {
  auto it = entries_.find(key.text());
  return it == entries_.end() ? Value::undefined() : it->second.value;
}

void WorldState::set(const Value& key, Value value) {
  if (value.is_undefined()) {
    entries_.erase(key.text());
    return;
  }
  auto [it, inserted] = entries_.try_emplace(key.text(), Entry{key, value});
  if (!inserted) it->second.value = std::move(value);
}

std::vector<const WorldState::Entry*> WorldState::entries_of(const std::string& op) const {
  std::vector<const Entry*> out;
  if (auto it = entries_.find(op); it != entries_.end() && it->second.key.is_compound() &&
                                   it->second.key.args().empty())
    out.push_back(&it->second);
  auto lo = entries_.lower_bound(op + "(");
  auto hi = entries_.lower_bound(op + ")");
  for (auto it = lo; it != hi; ++it)
    if (it->second.key.head() == op) out.push_back(&it->second);
  return out;
}

bool operator==(const WorldState& a, const WorldState& b) {
  if (a.entries_.size() != b.entries_.size()) return false;
  auto it = b.entries_.begin();
  for (const auto& [k, e] : a.entries_) {
    if (k != it->first || !(e.value == it->second.value)) return false;
    ++it;
  }
  return true;
}

Value make_key(const std::string& op, std::vector<Value> args) {
  return Value::compound(op, std::move(args));
}

}  // namespace sps
