#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "common.hpp"
#include "sps/encodings/encodings.hpp"
#include "sps/uncertainty.hpp"

namespace sps::enc {

using namespace detail;

PcfgDesc parse_pcfg(std::string_view text) {
  json j = parse_json(text);
  PcfgDesc d;
  d.nonterminals = get_strings(j, "nonterminals");
  d.terminals = get_strings(j, "terminals");
  d.start = get_string(j, "start");
  if (has(j, "max_length")) d.max_length = get_size(j, "max_length");
  for (const auto& r : field(j, "rules")) {
    Production p;
    p.name = get_string(r, "name");
    p.lhs = get_string(r, "lhs");
    p.rhs = get_strings(r, "rhs");
    p.p = get_number(r, "p");
    d.rules.push_back(std::move(p));
  }
  validate(d);
  return d;
}

void validate(const PcfgDesc& d) {
  Names names({"M", "T", "String", "TString", "cs", "cd"});
  for (const auto& m : d.nonterminals) names.claim(m, "nonterminal");
  for (const auto& t : d.terminals) names.claim(t, "terminal");
  std::set<std::string> ms(d.nonterminals.begin(), d.nonterminals.end());
  std::set<std::string> ts(d.terminals.begin(), d.terminals.end());
  if (!ms.count(d.start)) invalid("start symbol '" + d.start + "' is not a nonterminal");
  if (d.max_length == 0) invalid("max_length must be positive");
  std::map<std::string, double> mass;
  for (const auto& r : d.rules) {
    names.claim(r.name, "rule");
    if (!ms.count(r.lhs)) invalid("rule '" + r.name + "' rewrites '" + r.lhs + "', which is not a nonterminal");
    for (const auto& s : r.rhs)
      if (!ms.count(s) && !ts.count(s)) invalid("rule '" + r.name + "' uses unknown symbol '" + s + "'");
    if (!(r.p >= 0.0 && r.p <= 1.0)) invalid("rule '" + r.name + "' has probability outside [0, 1]");
    mass[r.lhs] += r.p;
  }
  for (const auto& [m, total] : mass)
    if (std::fabs(total - 1.0) > 1e-9)
      invalid("probabilities of rules for '" + m + "' sum to " + std::to_string(total) + ", not 1");
}

std::string emit_pcfg(const PcfgDesc& d) {
  validate(d);
  std::vector<std::string> symbols = d.nonterminals;
  symbols.insert(symbols.end(), d.terminals.begin(), d.terminals.end());
  std::ostringstream out;
  out << "# Probabilistic grammar: cs is the current string, cd the current derivation.\n";
  out << "individual " << join(symbols, ", ") << ";\n";
  out << "concept M = {" << join(d.nonterminals, ", ") << "};\n";
  out << "concept T = {" << join(d.terminals, ", ") << "};\n";
  out << "concept String = strings {" << join(symbols, ", ") << "} max " << d.max_length << ";\n";
  out << "concept TString = strings {" << join(d.terminals, ", ") << "} max " << d.max_length << ";\n";
  out << "operator cs -> String;\n";
  out << "operator cd -> DerivationC;\n";
  for (const auto& r : d.rules) {
    std::string alpha = r.rhs.empty() ? "\"\"" : "\"" + join(r.rhs, " ") + "\"";
    out << "schema " << r.name << ": cs = s ++ " << r.lhs << " ++ s2 -> (cs, cd) = (s ++ " << alpha
        << " ++ s2, cd ++ " << r.name << ") where s: TString, s2: String;\n";
  }
  for (const auto& r : d.rules) out << "pr(" << r.name << ") = " << format_real(r.p) << ";\n";
  out << "init {\n  cs = " << d.start << ";\n  cd = \"\";\n}\n";
  out << "config {\n  probability = on;\n}\n";
  return out.str();
}

dsl::Program compile_pcfg(const PcfgDesc& d) { return dsl::load(emit_pcfg(d), "<pcfg>"); }

std::vector<CompleteDerivation> enumerate_derivations(const dsl::Program& p, std::size_t max_rules) {
  const SPS sps = dsl::prepare(p, p.transformed);
  const Structure& s = *sps.structure;
  std::vector<CompleteDerivation> out;
  std::vector<std::string> path;
  std::function<void(const WorldState&)> visit = [&](const WorldState& w) {
    auto ts = triggered_set(sps, w);
    if (ts.empty()) {
      CompleteDerivation c;
      c.rules = path;
      c.yield = as_sequence(w.get(make_key("cs", {})));
      auto pr = current_derivation_probability(w);
      c.probability = pr && pr->is_real() ? pr->as_real() : 0.0;
      out.push_back(std::move(c));
      return;
    }
    if (path.size() >= max_rules) return;
    for (const auto& t : ts) {
      const Rule& r = sps.rules[t.rule_index];
      WorldState next = w;
      try {
        Rule g = ground_instance(r, t.bindings, s);
        commit(consequent_writes(g, w, s), next, s);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::RangeViolation) continue;
        throw;
      }
      path.push_back(r.id);
      visit(next);
      path.pop_back();
    }
  };
  visit(sps.initial);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.rules < b.rules; });
  return out;
}

}  // namespace sps::enc
