#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sps/eval.hpp"
#include "sps/structure.hpp"
#include "sps/term.hpp"
#include "sps/world_state.hpp"

namespace sps {

struct Declaration {
  std::string var;
  std::string concept_name;
  friend bool operator==(const Declaration&, const Declaration&) = default;
};

// A production rule. With no declarations it is a ground rule; otherwise a
// schema standing for all of its ground instances.
struct Rule {
  std::string id;
  std::vector<Declaration> declarations;
  std::vector<Assertion> antecedent;
  Assertion consequent;

  bool is_ground() const { return declarations.empty(); }
  // `id: a1, a2 -> c where x: C`
  std::string str() const;
};

// `r` for ground rules, `r[x1=v1,...]` (declaration order) for instances.
std::string instance_id(const Rule& r, const Bindings& eta);

// Throws InvalidAssignment when eta misses/adds variables or leaves a concept.
Rule ground_instance(const Rule& r, const Bindings& eta, const Structure& s);

// All assignments of r's declarations, lexicographic in concept member order.
// Throws InfiniteConcept.
std::vector<Bindings> enumerate_assignments(const Rule& r, const Structure& s);

// All instances, lexicographic in concept member order. Throws InfiniteConcept.
std::vector<Rule> enumerate_instances(const Rule& r, const Structure& s);

// Throws NonGround for schemas.
bool is_triggered(const Rule& ground, const WorldState& w, const Structure& s);

// Assignments whose instances are triggered in `w`, sorted lexicographically
// by concept order. Equivalent to filtering enumerate_instances() through
// is_triggered(), but driven by the valuation so large or generated concepts
// are only enumerated for variables nothing else constrains.
std::vector<Bindings> match(const Rule& r, const WorldState& w, const Structure& s);

// The least triggered assignment, if any. Cheaper than match() when
// unconstrained variables range over large concepts.
std::optional<Bindings> first_match(const Rule& r, const WorldState& w, const Structure& s);

// Lexicographic comparison of two assignments of `r`.
bool assignment_less(const Rule& r, const Bindings& a, const Bindings& b, const Structure& s);

// Rule shape invariants: declared concepts exist, variables declared once and
// every used variable declared, names resolve, consequent lhs assignable.
std::vector<Diagnostic> validate_rule(const Rule& r, const Structure& s);

}  // namespace sps
