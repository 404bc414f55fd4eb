#include <set>
#include <sstream>

#include "common.hpp"
#include "sps/encodings/encodings.hpp"

namespace sps::enc {

using namespace detail;

TransitionSystemDesc parse_transition_system(std::string_view text) {
  json j = parse_json(text);
  TransitionSystemDesc d;
  d.states = get_strings(j, "states");
  d.actions = get_strings(j, "actions");
  if (has(j, "initial")) d.initial = get_string(j, "initial");
  if (has(j, "nondeterministic")) {
    const auto& v = field(j, "nondeterministic");
    if (!v.is_boolean()) invalid("field 'nondeterministic' must be a boolean");
    d.nondeterministic = v.get<bool>();
  }
  if (has(j, "transitions")) {
    const auto& ts = field(j, "transitions");
    if (!ts.is_array()) invalid("field 'transitions' must be a list");
    for (const auto& t : ts) {
      if (!t.is_array() || t.size() != 3 || !t[0].is_string() || !t[1].is_string() ||
          !t[2].is_string())
        invalid("a transition must be [state, action, state]");
      d.transitions.push_back({t[0].get<std::string>(), t[1].get<std::string>(), t[2].get<std::string>()});
    }
  }
  validate(d);
  return d;
}

void validate(const TransitionSystemDesc& d) {
  Names names({"State", "States", "Actions", "Do"});
  for (const auto& s : d.states) names.claim(s, "state");
  for (const auto& a : d.actions) names.claim(a, "action");
  std::set<std::string> states(d.states.begin(), d.states.end());
  std::set<std::string> actions(d.actions.begin(), d.actions.end());
  if (d.initial && !states.count(*d.initial)) invalid("initial state '" + *d.initial + "' is not a state");
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& t : d.transitions) {
    if (!states.count(t.from)) invalid("transition from unknown state '" + t.from + "'");
    if (!states.count(t.to)) invalid("transition to unknown state '" + t.to + "'");
    if (!actions.count(t.action)) invalid("transition on unknown action '" + t.action + "'");
    if (!d.nondeterministic && !seen.insert({t.from, t.action}).second)
      invalid("duplicate transition for state '" + t.from + "' and action '" + t.action +
              "' in a deterministic system");
  }
}

std::string emit_transition_system(const TransitionSystemDesc& d) {
  validate(d);
  std::ostringstream out;
  out << "# State-transition system: one rule per transition.\n";
  std::vector<std::string> all = d.states;
  all.insert(all.end(), d.actions.begin(), d.actions.end());
  if (!all.empty()) out << "individual " << join(all, ", ") << ";\n";
  out << "concept States = {" << join(d.states, ", ") << "};\n";
  out << "concept Actions = {" << join(d.actions, ", ") << "};\n";
  out << "operator State -> States;\n";
  out << "operator Do(Actions) -> Bool;\n";
  for (std::size_t i = 0; i < d.transitions.size(); ++i) {
    const auto& t = d.transitions[i];
    out << "rule t_" << i + 1 << ": State = " << t.from << ", Do(" << t.action << ") -> State = "
        << t.to << ";\n";
  }
  if (d.initial) out << "init {\n  State = " << *d.initial << ";\n}\n";
  return out.str();
}

dsl::Program compile_transition_system(const TransitionSystemDesc& d) {
  return dsl::load(emit_transition_system(d), "<transition system>");
}

std::string door_state_name(std::size_t n, std::uint64_t closed) {
  std::string s = "s_";
  for (std::size_t i = 0; i < n; ++i) s += (closed >> i & 1) ? 'c' : 'o';
  return s;
}

TransitionSystemDesc door_transition_system(std::size_t n, bool self_loops) {
  if (n == 0 || n > 20) invalid("door count must be between 1 and 20");
  TransitionSystemDesc d;
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t m = 0; m < count; ++m) d.states.push_back(door_state_name(n, m));
  for (std::size_t i = 1; i <= n; ++i) {
    d.actions.push_back("close_" + std::to_string(i));
    d.actions.push_back("open_" + std::to_string(i));
  }
  d.initial = d.states.front();
  for (std::uint64_t m = 0; m < count; ++m) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint64_t bit = std::uint64_t{1} << i;
      const bool closed = m & bit;
      const std::string idx = std::to_string(i + 1);
      if (closed) {
        if (self_loops) d.transitions.push_back({d.states[m], "close_" + idx, d.states[m]});
        d.transitions.push_back({d.states[m], "open_" + idx, d.states[m & ~bit]});
      } else {
        d.transitions.push_back({d.states[m], "close_" + idx, d.states[m | bit]});
        if (self_loops) d.transitions.push_back({d.states[m], "open_" + idx, d.states[m]});
      }
    }
  }
  return d;
}

std::string door_sps_text(std::size_t n, std::uint64_t closed) {
  if (n == 0) invalid("door count must be positive");
  std::vector<std::string> doors, actions;
  for (std::size_t i = 1; i <= n; ++i) doors.push_back("door_" + std::to_string(i));
  for (const auto& x : doors) actions.push_back("Close(" + x + ")");
  for (const auto& x : doors) actions.push_back("Open(" + x + ")");
  std::ostringstream out;
  out << "individual " << join(doors, ", ") << ", o, c;\n";
  out << "concept Door = {" << join(doors, ", ") << "};\n";
  out << "concept Position = {o, c};\n";
  out << "constructor Close(Door);\n";
  out << "constructor Open(Door);\n";
  out << "concept Action = {" << join(actions, ", ") << "};\n";
  out << "operator Status(Door) -> Position;\n";
  out << "operator Do(Action) -> Bool;\n";
  out << "schema close_open: Status(x) = o, Do(Close(x)) -> Status(x) = c where x: Door;\n";
  out << "schema close_closed: Status(x) = c, Do(Close(x)) -> Status(x) = c where x: Door;\n";
  out << "schema open_open: Status(x) = o, Do(Open(x)) -> Status(x) = o where x: Door;\n";
  out << "schema open_closed: Status(x) = c, Do(Open(x)) -> Status(x) = o where x: Door;\n";
  out << "init {\n";
  for (std::size_t i = 0; i < n; ++i)
    out << "  Status(" << doors[i] << ") = " << ((closed >> i & 1) ? 'c' : 'o') << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace sps::enc
