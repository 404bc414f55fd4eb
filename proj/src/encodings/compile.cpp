#include <fstream>
#include <sstream>

#include "common.hpp"
#include "sps/encodings/encodings.hpp"

namespace sps::enc {

std::optional<Kind> kind_from_name(std::string_view name) {
  if (name == "ts") return Kind::TransitionSystem;
  if (name == "tm") return Kind::TuringMachine;
  if (name == "axioms") return Kind::AxiomSystem;
  if (name == "ca") return Kind::CellularAutomaton;
  if (name == "pcfg") return Kind::Pcfg;
  return std::nullopt;
}

std::string compile_text(Kind kind, std::string_view json) {
  switch (kind) {
    case Kind::TransitionSystem: return emit_transition_system(parse_transition_system(json));
    case Kind::TuringMachine: return emit_turing_machine(parse_turing_machine(json));
    case Kind::AxiomSystem: return emit_axiom_system(parse_axiom_system(json));
    case Kind::CellularAutomaton: return emit_cellular_automaton(parse_cellular_automaton(json));
    case Kind::Pcfg: return emit_pcfg(parse_pcfg(json));
  }
  return {};
}

std::string compile_file(Kind kind, const std::string& path) {
  std::ifstream in(path);
  if (!in) detail::invalid("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return compile_text(kind, ss.str());
}

}  // namespace sps::enc
