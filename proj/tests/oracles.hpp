#pragma once

// Reference simulators written directly against each formalism, with no use
// of the engine. Tests compare compiled systems against these.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

// ---- door domain as an explicit 2^n-state transition system ----

struct DoorEvent {
  bool close = true;
  std::size_t door = 0;  // 0-based
};

class DoorSystem {
 public:
  explicit DoorSystem(std::size_t n) : n_(n), next_(std::size_t{1} << n, std::vector<std::uint32_t>(2 * n)) {
    for (std::uint32_t s = 0; s < next_.size(); ++s)
      for (std::size_t d = 0; d < n; ++d) {
        next_[s][2 * d] = s | (1u << d);
        next_[s][2 * d + 1] = s & ~(1u << d);
      }
  }
  std::size_t states() const { return next_.size(); }
  // State-changing transitions only: n per state.
  std::size_t changing_transitions() const {
    std::size_t k = 0;
    for (std::uint32_t s = 0; s < next_.size(); ++s)
      for (auto t : next_[s]) k += t != s;
    return k;
  }
  std::uint32_t run(std::uint32_t s, const std::vector<DoorEvent>& script) const {
    for (const auto& e : script) s = next_[s][2 * e.door + (e.close ? 0 : 1)];
    return s;
  }

 private:
  std::size_t n_;
  std::vector<std::vector<std::uint32_t>> next_;
};

// ---- labelled transition systems ----

struct Lts {
  std::vector<std::tuple<std::string, std::string, std::string>> transitions;
};

// Per step, the first listed transition leaving the current state on one of
// the step's actions is taken.
inline std::string run_lts(const Lts& t, std::string cur, const std::vector<std::vector<std::string>>& steps) {
  for (const auto& acts : steps) {
    for (const auto& [from, a, to] : t.transitions) {
      bool on = false;
      for (const auto& x : acts) on = on || x == a;
      if (from == cur && on) {
        cur = to;
        break;
      }
    }
  }
  return cur;
}

// ---- Turing machines on a bounded tape ----

struct TmRule {
  std::string next;
  std::string write;
  int move = 1;
};

struct TmResult {
  std::vector<std::string> tape;
  std::string state;
  std::size_t head = 0;
  std::size_t steps = 0;
  bool fell_off = false;
  bool halted = false;
};

inline TmResult run_tm(const std::map<std::pair<std::string, std::string>, TmRule>& delta, std::string state,
                       std::vector<std::string> tape, std::size_t head, std::size_t max_steps) {
  TmResult r;
  while (r.steps < max_steps) {
    auto it = delta.find({state, tape[head]});
    if (it == delta.end()) {
      r.halted = true;
      break;
    }
    long long nh = static_cast<long long>(head) + it->second.move;
    if (nh < 0 || nh >= static_cast<long long>(tape.size())) {
      r.fell_off = true;
      break;
    }
    tape[head] = it->second.write;
    state = it->second.next;
    head = static_cast<std::size_t>(nh);
    ++r.steps;
  }
  r.tape = std::move(tape);
  r.state = std::move(state);
  r.head = head;
  return r;
}

// ---- cellular automata ----

using Grid = std::vector<std::vector<int>>;
// Local rule: neighbourhood values in offset order -> new value.
using LocalRule = std::function<int(const std::vector<int>&)>;

struct CaShape {
  std::vector<std::pair<int, int>> offsets;  // (dx, dy)
  bool wrap = true;
  int edge = 0;
};

inline std::vector<int> neighbours(const Grid& g, const CaShape& s, std::size_t r, std::size_t c) {
  const long long h = static_cast<long long>(g.size()), w = static_cast<long long>(g[0].size());
  std::vector<int> out;
  for (auto [dx, dy] : s.offsets) {
    long long rr = static_cast<long long>(r) + dy, cc = static_cast<long long>(c) + dx;
    if (s.wrap) {
      rr = ((rr % h) + h) % h;
      cc = ((cc % w) + w) % w;
      out.push_back(g[rr][cc]);
    } else if (rr < 0 || rr >= h || cc < 0 || cc >= w) {
      out.push_back(s.edge);
    } else {
      out.push_back(g[rr][cc]);
    }
  }
  return out;
}

inline Grid ca_sync(Grid g, const CaShape& s, const LocalRule& f, std::size_t generations) {
  for (std::size_t k = 0; k < generations; ++k) {
    Grid n = g;
    for (std::size_t r = 0; r < g.size(); ++r)
      for (std::size_t c = 0; c < g[r].size(); ++c) n[r][c] = f(neighbours(g, s, r, c));
    g = std::move(n);
  }
  return g;
}

// In-place row-major sweep: later cells see earlier cells' new values.
inline Grid ca_async(Grid g, const CaShape& s, const LocalRule& f, std::size_t generations) {
  for (std::size_t k = 0; k < generations; ++k)
    for (std::size_t r = 0; r < g.size(); ++r)
      for (std::size_t c = 0; c < g[r].size(); ++c) g[r][c] = f(neighbours(g, s, r, c));
  return g;
}

inline LocalRule elementary(unsigned number) {
  return [number](const std::vector<int>& v) { return static_cast<int>((number >> (4 * v[0] + 2 * v[1] + v[2])) & 1); };
}

// Moore neighbourhood listed row-major with the centre at index 4.
inline LocalRule conway() {
  return [](const std::vector<int>& v) {
    int live = 0;
    for (std::size_t i = 0; i < 9; ++i)
      if (i != 4) live += v[i];
    return static_cast<int>(v[4] ? (live == 2 || live == 3) : live == 3);
  };
}

// ---- PCFG leftmost derivations ----

struct Prod {
  std::string name;
  std::string lhs;
  std::vector<std::string> rhs;
  double p = 1.0;
};

struct Derivation {
  std::vector<std::string> rules;
  std::vector<std::string> yield;
  double probability = 1.0;
};

inline std::vector<Derivation> leftmost_derivations(const std::vector<Prod>& g, const std::vector<std::string>& nonterminals,
                                                    const std::string& start, std::size_t max_len,
                                                    std::size_t max_rules = 64) {
  auto is_nt = [&](const std::string& x) {
    for (const auto& n : nonterminals)
      if (n == x) return true;
    return false;
  };
  std::vector<Derivation> out;
  std::function<void(std::vector<std::string>, Derivation)> go = [&](std::vector<std::string> form, Derivation d) {
    std::size_t i = 0;
    while (i < form.size() && !is_nt(form[i])) ++i;
    if (i == form.size()) {
      d.yield = form;
      out.push_back(d);
      return;
    }
    if (d.rules.size() >= max_rules) return;
    for (const auto& p : g) {
      if (p.lhs != form[i]) continue;
      std::vector<std::string> next(form.begin(), form.begin() + static_cast<long>(i));
      next.insert(next.end(), p.rhs.begin(), p.rhs.end());
      next.insert(next.end(), form.begin() + static_cast<long>(i) + 1, form.end());
      if (next.size() > max_len) continue;
      Derivation e = d;
      e.rules.push_back(p.name);
      e.probability *= p.p;
      go(next, e);
    }
  };
  go({start}, Derivation{});
  return out;
}

}  // namespace oracle
