#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sps/dsl/build.hpp"

// Compilers from classic formalisms to SPS documents. Each description has a
// JSON file format; parse_* reads it, validate() throws InvalidDescription,
// emit_* produces DSL text, and compile_* loads that text.
namespace sps::enc {

enum class Kind { TransitionSystem, TuringMachine, AxiomSystem, CellularAutomaton, Pcfg };
std::optional<Kind> kind_from_name(std::string_view name);  // ts, tm, axioms, ca, pcfg

// Reads a description file of the given kind and emits DSL text.
std::string compile_file(Kind kind, const std::string& path);
std::string compile_text(Kind kind, std::string_view json);

// ---- state-transition systems -------------------------------------------

struct Transition {
  std::string from;
  std::string action;
  std::string to;
};

struct TransitionSystemDesc {
  std::vector<std::string> states;
  std::vector<std::string> actions;
  std::optional<std::string> initial;
  std::vector<Transition> transitions;
  bool nondeterministic = false;
};

TransitionSystemDesc parse_transition_system(std::string_view json);
void validate(const TransitionSystemDesc& d);
// `State = s, Do(a) -> State = s'` per transition, ids t_1, t_2, ...
std::string emit_transition_system(const TransitionSystemDesc& d);
dsl::Program compile_transition_system(const TransitionSystemDesc& d);

// ---- door domain ---------------------------------------------------------

// The four-schema door system for n doors; bit i of `closed` closes door i+1.
std::string door_sps_text(std::size_t n, std::uint64_t closed = 0);
// The same domain as a flat transition system over 2^n states named s_<o|c>...
// With self_loops, closing a closed door (or opening an open one) keeps the
// state and is listed as a transition too.
TransitionSystemDesc door_transition_system(std::size_t n, bool self_loops);
std::string door_state_name(std::size_t n, std::uint64_t closed);

// ---- Turing machines -----------------------------------------------------

struct TmTransition {
  std::string state;
  std::string read;
  std::string next;
  std::string write;
  char move = 'R';  // 'L' or 'R'
};

struct TuringMachineDesc {
  std::vector<std::string> states;
  std::string start;
  std::vector<std::string> halt;
  std::vector<std::string> alphabet;
  std::string blank;
  std::vector<TmTransition> transitions;
  std::vector<std::string> tape;  // input symbols, written from cell `offset`
  std::size_t offset = 1;
  std::size_t head = 1;
  std::size_t cells = 0;  // 0: offset + tape length + 2
};

TuringMachineDesc parse_turing_machine(std::string_view json);
void validate(const TuringMachineDesc& d);
std::string emit_turing_machine(const TuringMachineDesc& d);
dsl::Program compile_turing_machine(const TuringMachineDesc& d);
std::size_t tape_cells(const TuringMachineDesc& d);
// Tape symbols (description names) of a compiled machine's valuation.
std::vector<std::string> read_tape(const TuringMachineDesc& d, const WorldState& w);
std::string read_tm_state(const TuringMachineDesc& d, const WorldState& w);

// ---- axiom systems -------------------------------------------------------

struct Connective {
  std::string name;
  std::size_t arity = 0;
};

struct AxiomSchema {
  std::string name;
  std::string formula;
};

struct InferenceRule {
  std::string name;
  std::vector<std::string> premises;
  std::string conclusion;
};

struct AxiomSystemDesc {
  std::vector<std::string> atoms;
  std::vector<Connective> connectives;
  std::size_t depth = 1;
  std::vector<AxiomSchema> axioms;
  std::vector<InferenceRule> rules;
  std::vector<std::string> theorems;  // initially proved
};

AxiomSystemDesc parse_axiom_system(std::string_view json);
void validate(const AxiomSystemDesc& d);
// Schema variables range over L (formulas up to `depth`); Prove ranges over
// the deeper Formula concept so every instance of a pattern is provable.
std::string emit_axiom_system(const AxiomSystemDesc& d);
dsl::Program compile_axiom_system(const AxiomSystemDesc& d);

// ---- cellular automata ---------------------------------------------------

struct CellularAutomatonDesc {
  std::size_t width = 0;
  std::size_t height = 1;
  std::vector<std::string> alphabet;
  std::vector<std::pair<int, int>> neighborhood;  // (dx, dy)
  std::vector<int> table;  // index: neighborhood values as a base-|alphabet| number
  bool wrap = true;
  int fixed_value = 0;
  std::vector<std::vector<int>> initial;  // rows
  bool synchronous = true;
  std::size_t generations = 1;
};

CellularAutomatonDesc parse_cellular_automaton(std::string_view json);
void validate(const CellularAutomatonDesc& d);
std::string emit_cellular_automaton(const CellularAutomatonDesc& d);
dsl::Program compile_cellular_automaton(const CellularAutomatonDesc& d);
std::string cell_name(std::size_t row, std::size_t col);
// Steps the basic strategy needs for the configured generations.
std::size_t ca_steps(const CellularAutomatonDesc& d);
std::vector<std::vector<int>> read_grid(const CellularAutomatonDesc& d, const WorldState& w);
// Elementary (radius 1) rule tables and Life-like B/S rules.
std::vector<int> wolfram_table(unsigned number);
std::vector<int> life_table(const std::string& rule);  // e.g. "B3/S23"
std::vector<std::pair<int, int>> moore_neighborhood();  // row-major, centre included

// ---- probabilistic context-free grammars ---------------------------------

struct Production {
  std::string name;
  std::string lhs;
  std::vector<std::string> rhs;
  double p = 1.0;
};

struct PcfgDesc {
  std::vector<std::string> nonterminals;
  std::vector<std::string> terminals;
  std::string start;
  std::vector<Production> rules;
  std::size_t max_length = 8;
};

PcfgDesc parse_pcfg(std::string_view json);
void validate(const PcfgDesc& d);
std::string emit_pcfg(const PcfgDesc& d);
dsl::Program compile_pcfg(const PcfgDesc& d);

struct CompleteDerivation {
  std::vector<std::string> rules;
  std::vector<std::string> yield;
  double probability = 0.0;
};

// Every complete derivation reachable in the compiled system, found by
// exploring all triggered instances; branches that exceed the length bound
// are cut, as are derivations longer than max_rules. Ordered by derivation.
std::vector<CompleteDerivation> enumerate_derivations(const dsl::Program& p, std::size_t max_rules = 64);

}  // namespace sps::enc
