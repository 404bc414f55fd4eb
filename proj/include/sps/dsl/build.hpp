#pragma once

#include <string>
#include <string_view>

#include "sps/dsl/ast.hpp"
#include "sps/engine.hpp"
#include "sps/strategies.hpp"

namespace sps::dsl {

// A resolved document: the basic system plus everything needed to run it.
struct Program {
  SPS sps;  // strategy block not lowered, probability layer not attached
  StrategySpec strategy;
  EngineConfig config;
  bool probability = false;
  bool strict_pr = false;
  // Default for running: lower the strategy block first.
  bool transformed = false;
};

// Resolves names and evaluates init/pr facts. Throws sps::Error(Parse) with a
// positioned diagnostic for unresolved names, arity and type mismatches.
Program build(const Document& doc, const std::string& source_name = "<input>");

// parse() + build().
Program load(std::string_view text, const std::string& source_name = "<input>");
Program load_file(const std::string& path);

// The system that actually runs: strategies lowered when `transformed`, then
// the probability layer attached when enabled.
SPS prepare(const Program& p, bool transformed);

// All structure, rule and strategy diagnostics.
std::vector<Diagnostic> check(const Program& p);

}  // namespace sps::dsl
