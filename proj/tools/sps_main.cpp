#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sps/dsl/build.hpp"
#include "sps/dsl/parser.hpp"
#include "sps/encodings/encodings.hpp"
#include "sps/engine.hpp"
#include "sps/error.hpp"

namespace {

using sps::dsl::Program;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw sps::Error(sps::ErrorCode::Parse, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Config blocks from $SPS_CONFIG come first so the document's own config and
// then command-line flags override them.
Program load_program(const std::string& path) {
  sps::dsl::Document doc;
  if (const char* cfg = std::getenv("SPS_CONFIG"); cfg && *cfg) {
    auto defaults = sps::dsl::parse(read_file(cfg), cfg);
    for (const auto& item : defaults.items) {
      if (!std::holds_alternative<sps::dsl::ConfigDecl>(item))
        throw sps::Error(sps::ErrorCode::InvalidConfig, std::string(cfg) + ": only config blocks are allowed");
      doc.items.push_back(item);
    }
  }
  auto main_doc = sps::dsl::parse(read_file(path), path);
  doc.items.insert(doc.items.end(), main_doc.items.begin(), main_doc.items.end());
  return sps::dsl::build(doc, path);
}

// Splits "r1,r2[x=a,y=b];r3" at separators outside brackets.
std::vector<std::string> split_ids(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char ch : text) {
    if (ch == '[' || ch == '(') ++depth;
    if (ch == ']' || ch == ')') --depth;
    if ((ch == ',' || ch == ';') && depth == 0) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

struct RunFlags {
  std::optional<std::size_t> steps;
  std::optional<std::uint64_t> seed;
  std::string policy;
  std::string script;
  std::string trace;
  std::string strategy;
};

void apply_flags(Program& p, const RunFlags& f) {
  if (f.steps) {
    if (*f.steps == 0) throw sps::Error(sps::ErrorCode::InvalidConfig, "--steps must be at least 1");
    p.config.max_steps = *f.steps;
  }
  if (f.seed) p.config.seed = *f.seed;
  if (f.policy == "first") p.config.policy = sps::Policy::FirstMatch;
  if (f.policy == "random") p.config.policy = sps::Policy::SeededRandom;
  if (f.policy == "script") p.config.policy = sps::Policy::Scripted;
  if (!f.script.empty()) {
    p.config.script = split_ids(f.script);
    if (f.policy.empty()) p.config.policy = sps::Policy::Scripted;
  }
  if (f.strategy == "basic") p.transformed = false;
  if (f.strategy == "transformed") p.transformed = true;
}

nlohmann::ordered_json record_json(const sps::StepRecord& r) {
  nlohmann::ordered_json j;
  j["step"] = r.step;
  j["events"] = r.events;
  j["triggered"] = r.triggered;
  j["selected"] = r.selected ? nlohmann::ordered_json(*r.selected) : nlohmann::ordered_json(nullptr);
  auto writes = nlohmann::ordered_json::array();
  for (const auto& w : r.writes) {
    nlohmann::ordered_json x;
    x["key"] = w.key.text();
    x["old"] = w.old_value.text();
    x["new"] = w.new_value.text();
    writes.push_back(std::move(x));
  }
  j["writes"] = std::move(writes);
  if (r.pr_cd && r.pr_cd->is_real()) j["pr_cd"] = r.pr_cd->as_real();
  else if (r.pr_cd) j["pr_cd"] = r.pr_cd->text();
  else j["pr_cd"] = nullptr;
  return j;
}

struct Outcome {
  sps::WorldState state;
  std::vector<std::string> derivation;
  std::size_t steps = 0;
  sps::HaltReason halt = sps::HaltReason::Quiescent;
};

// The engine loop of sps::run, stepped by hand so failures carry their step.
Outcome execute(const sps::SPS& system, const sps::EngineConfig& cfg, const std::string& trace_path) {
  sps::Engine e(system, cfg);
  Outcome out;
  auto finish = [&]() {
    out.state = e.state();
    out.derivation = e.derivation();
    if (trace_path.empty()) return;
    std::ofstream t(trace_path);
    if (!t) throw sps::Error(sps::ErrorCode::InvalidConfig, "cannot write " + trace_path);
    for (const auto& r : e.records()) t << record_json(r).dump() << '\n';
  };
  while (true) {
    if (e.steps_taken() >= cfg.max_steps) {
      out.halt = sps::HaltReason::StepLimit;
      out.steps = e.steps_taken();
      break;
    }
    std::optional<std::string> applied;
    try {
      applied = e.step();
    } catch (const sps::Error& err) {
      finish();
      throw sps::Error(err.code(), "step " + std::to_string(e.steps_taken()) + ": " + err.what());
    }
    if (!applied && !e.events_pending()) {
      out.halt = sps::HaltReason::Quiescent;
      out.steps = e.steps_taken() - 1;
      break;
    }
  }
  finish();
  return out;
}

std::string join_derivation(const std::vector<std::string>& d) {
  std::string s;
  for (std::size_t i = 0; i < d.size(); ++i) s += (i ? "; " : "") + d[i];
  return s;
}

int cmd_check(const std::string& file) {
  Program p = load_program(file);
  auto diags = sps::dsl::check(p);
  for (const auto& d : diags) std::cerr << file << ": " << d.invariant << ": " << d.entity << ": " << d.message << '\n';
  if (!diags.empty()) return 1;
  std::cout << "ok: " << p.sps.rules.size() << " rules\n";
  return 0;
}

int cmd_run(const std::string& file, const RunFlags& flags) {
  Program p = load_program(file);
  apply_flags(p, flags);
  if (auto diags = sps::dsl::check(p); !diags.empty()) {
    for (const auto& d : diags) std::cerr << file << ": " << d.invariant << ": " << d.entity << ": " << d.message << '\n';
    return 1;
  }
  sps::EngineConfig cfg = p.config;
  cfg.trace = !flags.trace.empty();
  sps::SPS system = sps::dsl::prepare(p, p.transformed);
  Outcome o = execute(system, cfg, flags.trace);
  for (const auto& [k, e] : o.state.entries()) std::cout << e.key.text() << " = " << e.value.text() << '\n';
  std::cout << "derivation: " << join_derivation(o.derivation) << '\n';
  std::cout << "steps: " << o.steps << '\n';
  std::cout << "halt: " << sps::to_string(o.halt) << '\n';
  return 0;
}

int cmd_prob(const std::string& file, const RunFlags& flags) {
  Program p = load_program(file);
  apply_flags(p, flags);
  if (!p.probability)
    throw sps::Error(sps::ErrorCode::Probability, file + ": the probability layer is off (config probability = on)");
  sps::EngineConfig cfg = p.config;
  cfg.trace = !flags.trace.empty();
  if (!p.config.script.empty()) cfg.max_steps = std::max(cfg.max_steps, p.config.script.size());
  sps::SPS system = sps::dsl::prepare(p, p.transformed);
  Outcome o = execute(system, cfg, flags.trace);
  auto pr = sps::current_derivation_probability(o.state);
  if (!pr || !pr->is_real()) throw sps::Error(sps::ErrorCode::Probability, "Pr(cd) is undefined");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", pr->as_real());
  std::cout << "derivation: " << join_derivation(o.derivation) << '\n';
  std::cout << "probability: " << buf << '\n';
  return 0;
}

int cmd_compile(const std::string& kind_name, const std::string& input, const std::string& output) {
  auto kind = sps::enc::kind_from_name(kind_name);
  if (!kind) {
    std::cerr << "unknown description kind '" << kind_name << "' (ts, tm, axioms, ca, pcfg)\n";
    return 2;
  }
  std::string text = sps::enc::compile_file(*kind, input);
  Program p = sps::dsl::load(text, output.empty() ? "<compiled>" : output);
  if (auto diags = sps::dsl::check(p); !diags.empty()) {
    for (const auto& d : diags) std::cerr << "compiled output: " << d.invariant << ": " << d.message << '\n';
    return 1;
  }
  if (output.empty() || output == "-") {
    std::cout << text;
  } else {
    std::ofstream out(output);
    if (!out) throw sps::Error(sps::ErrorCode::InvalidConfig, "cannot write " + output);
    out << text;
  }
  return 0;
}

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--steps", f.steps, "Step limit");
  cmd->add_option("--seed", f.seed, "Seed for the random policy");
  cmd->add_option("--policy", f.policy, "Selection policy")->check(CLI::IsMember({"first", "random", "script"}));
  cmd->add_option("--script", f.script, "Rule or instance ids for the script policy, comma separated");
  cmd->add_option("--trace", f.trace, "Write one JSON record per step to this file");
  cmd->add_option("--strategy", f.strategy, "Run the basic rules or the lowered strategy block")
      ->check(CLI::IsMember({"basic", "transformed"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structured production system engine"};
  app.require_subcommand(1);

  std::string file, kind, input, output;
  RunFlags run_flags, prob_flags;

  auto* check = app.add_subcommand("check", "Parse and validate a system");
  check->add_option("file", file)->required();

  auto* run = app.add_subcommand("run", "Run a system and print the final state");
  run->add_option("file", file)->required();
  add_run_flags(run, run_flags);

  auto* compile = app.add_subcommand("compile", "Translate a formalism description into a system");
  compile->add_option("kind", kind, "ts, tm, axioms, ca or pcfg")->required();
  compile->add_option("input", input)->required();
  compile->add_option("-o,--output", output, "Output file (default: standard output)");

  auto* prob = app.add_subcommand("prob", "Run a probabilistic system and print Pr(cd)");
  prob->add_option("file", file)->required();
  prob->add_option("--derivation-of", prob_flags.script, "Rule or instance ids to apply, comma separated");
  add_run_flags(prob, prob_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*check) return cmd_check(file);
    if (*run) return cmd_run(file, run_flags);
    if (*compile) return cmd_compile(kind, input, output);
    if (*prob) return cmd_prob(file, prob_flags);
  } catch (const sps::Error& e) {
    std::cerr << "error: " << sps::to_string(e.code()) << ": " << e.what() << '\n';
    return 1;
  }
  return 2;
}
