#include <map>
#include <set>
#include <sstream>

#include "common.hpp"
#include "sps/encodings/encodings.hpp"

namespace sps::enc {

using namespace detail;

namespace {

// Symbols and states may be arbitrary strings ("0", "_"), so the document
// refers to them through generated identifiers.
std::string sym_name(const TuringMachineDesc& d, const std::string& sym) {
  for (std::size_t i = 0; i < d.alphabet.size(); ++i)
    if (d.alphabet[i] == sym) return "sym_" + std::to_string(i);
  invalid("unknown tape symbol '" + sym + "'");
}

std::string state_name(const TuringMachineDesc& d, const std::string& q) {
  for (std::size_t i = 0; i < d.states.size(); ++i)
    if (d.states[i] == q) return "q_" + std::to_string(i);
  invalid("unknown machine state '" + q + "'");
}

std::string tm_cell(std::size_t i) { return "cell_" + std::to_string(i); }

std::vector<std::string> split_tape(const json& v, const TuringMachineDesc& d) {
  std::vector<std::string> out;
  if (v.is_string()) {
    for (char ch : v.get<std::string>()) out.emplace_back(1, ch);
  } else if (v.is_array()) {
    for (const auto& x : v) {
      if (!x.is_string()) invalid("tape entries must be strings");
      out.push_back(x.get<std::string>());
    }
  } else {
    invalid("field 'tape' must be a string or a list of symbols");
  }
  (void)d;
  return out;
}

}  // namespace

std::size_t tape_cells(const TuringMachineDesc& d) {
  return d.cells ? d.cells : d.offset + d.tape.size() + 2;
}

TuringMachineDesc parse_turing_machine(std::string_view text) {
  json j = parse_json(text);
  TuringMachineDesc d;
  d.states = get_strings(j, "states");
  d.start = get_string(j, "start");
  d.halt = has(j, "halt") ? get_strings(j, "halt") : std::vector<std::string>{};
  d.alphabet = get_strings(j, "alphabet");
  d.blank = get_string(j, "blank");
  if (has(j, "tape")) d.tape = split_tape(field(j, "tape"), d);
  if (has(j, "offset")) d.offset = get_size(j, "offset");
  d.head = has(j, "head") ? get_size(j, "head") : d.offset;
  if (has(j, "cells")) d.cells = get_size(j, "cells");
  if (has(j, "transitions")) {
    const auto& ts = field(j, "transitions");
    if (!ts.is_array()) invalid("field 'transitions' must be a list");
    for (const auto& t : ts) {
      TmTransition tr;
      tr.state = get_string(t, "state");
      tr.read = get_string(t, "read");
      tr.next = get_string(t, "next");
      tr.write = get_string(t, "write");
      std::string mv = get_string(t, "move");
      if (mv != "L" && mv != "R") invalid("move must be L or R");
      tr.move = mv[0];
      d.transitions.push_back(tr);
    }
  }
  validate(d);
  return d;
}

void validate(const TuringMachineDesc& d) {
  std::set<std::string> states, syms;
  for (const auto& q : d.states)
    if (q.empty() || !states.insert(q).second) invalid("duplicate or empty state '" + q + "'");
  for (const auto& a : d.alphabet)
    if (a.empty() || !syms.insert(a).second) invalid("duplicate or empty symbol '" + a + "'");
  if (!states.count(d.start)) invalid("start state '" + d.start + "' is not a state");
  for (const auto& h : d.halt)
    if (!states.count(h)) invalid("halt state '" + h + "' is not a state");
  if (!syms.count(d.blank)) invalid("blank '" + d.blank + "' is not in the alphabet");
  for (const auto& s : d.tape)
    if (!syms.count(s)) invalid("tape symbol '" + s + "' is not in the alphabet");
  const std::size_t n = tape_cells(d);
  if (n == 0) invalid("the tape needs at least one cell");
  if (d.offset + d.tape.size() > n) invalid("the input does not fit on the tape");
  if (d.head >= n) invalid("head position is outside the tape");
  std::set<std::string> halting(d.halt.begin(), d.halt.end());
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& t : d.transitions) {
    if (!states.count(t.state) || !states.count(t.next)) invalid("transition uses an unknown state");
    if (!syms.count(t.read) || !syms.count(t.write)) invalid("transition uses an unknown symbol");
    if (t.move != 'L' && t.move != 'R') invalid("move must be L or R");
    if (halting.count(t.state)) invalid("halt state '" + t.state + "' has an outgoing transition");
    if (!seen.insert({t.state, t.read}).second)
      invalid("duplicate transition for state '" + t.state + "' reading '" + t.read + "'");
  }
}

std::string emit_turing_machine(const TuringMachineDesc& d) {
  validate(d);
  const std::size_t n = tape_cells(d);
  std::vector<std::string> syms, states, cells;
  for (const auto& a : d.alphabet) syms.push_back(sym_name(d, a));
  for (const auto& q : d.states) states.push_back(state_name(d, q));
  for (std::size_t i = 0; i < n; ++i) cells.push_back(tm_cell(i));

  std::ostringstream out;
  out << "# Bounded-tape Turing machine over " << n << " cells.\n";
  for (std::size_t i = 0; i < d.alphabet.size(); ++i)
    out << "# " << syms[i] << " is symbol '" << d.alphabet[i] << "'\n";
  for (std::size_t i = 0; i < d.states.size(); ++i)
    out << "# " << states[i] << " is state '" << d.states[i] << "'\n";
  out << "individual " << join(syms, ", ") << ";\n";
  out << "individual " << join(states, ", ") << ";\n";
  out << "individual " << join(cells, ", ") << ";\n";
  out << "concept Sym = {" << join(syms, ", ") << "};\n";
  out << "concept MState = {" << join(states, ", ") << "};\n";
  out << "concept Cell = {" << join(cells, ", ") << "};\n";
  out << "operator Tape(Cell) -> Sym;\n";
  out << "operator Head -> Cell;\n";
  out << "operator Q -> MState;\n";
  out << "operator Right(Cell) -> Cell;\n";
  out << "operator Left(Cell) -> Cell;\n";
  for (std::size_t i = 0; i < d.transitions.size(); ++i) {
    const auto& t = d.transitions[i];
    out << "schema d_" << i + 1 << ": Q = " << state_name(d, t.state) << ", Head = x, Tape(x) = "
        << sym_name(d, t.read) << " -> (Q, Tape(x), Head) = (" << state_name(d, t.next) << ", "
        << sym_name(d, t.write) << ", " << (t.move == 'L' ? "Left" : "Right") << "(x)) where x: Cell;\n";
  }
  out << "init {\n";
  out << "  Q = " << state_name(d, d.start) << ";\n";
  out << "  Head = " << tm_cell(d.head) << ";\n";
  for (std::size_t i = 0; i < n; ++i) {
    std::string sym = d.blank;
    if (i >= d.offset && i < d.offset + d.tape.size()) sym = d.tape[i - d.offset];
    out << "  Tape(" << cells[i] << ") = " << sym_name(d, sym) << ";\n";
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    out << "  Right(" << cells[i] << ") = " << cells[i + 1] << ";\n";
    out << "  Left(" << cells[i + 1] << ") = " << cells[i] << ";\n";
  }
  out << "}\n";
  return out.str();
}

dsl::Program compile_turing_machine(const TuringMachineDesc& d) {
  return dsl::load(emit_turing_machine(d), "<turing machine>");
}

std::vector<std::string> read_tape(const TuringMachineDesc& d, const WorldState& w) {
  std::map<std::string, std::string> back;
  for (const auto& a : d.alphabet) back[sym_name(d, a)] = a;
  std::vector<std::string> out;
  for (std::size_t i = 0; i < tape_cells(d); ++i) {
    const Value& v = w.get(make_key("Tape", {Value::atom(tm_cell(i))}));
    auto it = back.find(v.text());
    out.push_back(it == back.end() ? v.text() : it->second);
  }
  return out;
}

std::string read_tm_state(const TuringMachineDesc& d, const WorldState& w) {
  const Value& v = w.get(make_key("Q", {}));
  for (const auto& q : d.states)
    if (state_name(d, q) == v.text()) return q;
  return v.text();
}

}  // namespace sps::enc
