#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sps/value.hpp"

namespace sps {

// Finite valuation from ground keys to values. A key is the value form of an
// assignable term: Status(door_1) is the compound Status(door_1), a 0-ary
// operator t is the compound `t` with no arguments. Absent keys read as
// undefined; writing undefined removes the entry.
class WorldState {
 public:
  struct Entry {
    Value key;
    Value value;
  };
  using Map = std::map<std::string, Entry>;

  const Value& get(const Value& key) const;
  void set(const Value& key, Value value);
  bool contains(const Value& key) const { return entries_.count(key.text()) > 0; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // All entries in canonical key order.
  const Map& entries() const { return entries_; }
  // Entries whose key is an application of operator `op`.
  std::vector<const Entry*> entries_of(const std::string& op) const;

  friend bool operator==(const WorldState& a, const WorldState& b);

 private:
  Map entries_;
};

// Key for O(args).
Value make_key(const std::string& op, std::vector<Value> args);

}  // namespace sps
