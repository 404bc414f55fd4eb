#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sps/value.hpp"

namespace sps {

class Structure;

// Upper bound on materialized concept sizes; larger generated concepts can
// still be tested for membership and matched, but not enumerated.
inline constexpr std::size_t kMaxEnumeration = 2'000'000;

// A named set of individuals.
//
// Explicit concepts list their members; member order is declaration order
// and drives grounding enumeration. Generated concepts (strings, formulas)
// are finite but described by a bound; membership is structural and members
// are produced on demand. Real, Probability, and the reification concepts are
// open: they support membership only.
class Concept {
 public:
  enum class Kind {
    Explicit,
    Strings,      // sequences over an alphabet, length <= max_length
    Formulas,     // constructor terms over atoms, nesting depth <= max_depth
    Real,
    Probability,  // reals in [0, 1]
    Rules,        // reified rule ids and instance ids
    Derivations,  // sequences of rule ids (empty, single, or longer)
    Assertions,   // reified assertions [a=b] / [a!=b]
    Reified,      // Rules + Derivations + Assertions + conditional assertions
  };

  struct Connective {
    std::string name;
    std::size_t arity = 0;
    friend bool operator==(const Connective&, const Connective&) = default;
  };

  static Concept explicit_set(std::string name, std::vector<Value> members);
  static Concept strings(std::string name, std::vector<std::string> alphabet, std::size_t max_length);
  static Concept formulas(std::string name, std::vector<std::string> atoms,
                          std::vector<Connective> connectives, std::size_t max_depth);
  static Concept builtin(std::string name, Kind kind);

  const std::string& name() const { return name_; }
  Kind kind() const { return kind_; }
  bool is_builtin() const;
  bool enumerable() const;
  // Number of members, when finite and cheap to compute.
  std::optional<std::size_t> size() const;

  bool contains(const Value& v, const Structure& s) const;
  // Materializes members in concept order; throws InfiniteConcept.
  std::vector<Value> members() const;
  // Total order consistent with members(); only meaningful for members.
  std::weak_ordering compare(const Value& a, const Value& b) const;

  // Explicit members as declared (empty for other kinds).
  const std::vector<Value>& declared_members() const { return members_; }
  const std::vector<std::string>& alphabet() const { return alphabet_; }
  const std::vector<Connective>& connectives() const { return connectives_; }
  std::size_t bound() const { return bound_; }

 private:
  std::string name_;
  Kind kind_ = Kind::Explicit;
  std::vector<Value> members_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::string> alphabet_;  // also formula atoms
  std::unordered_map<std::string, std::size_t> alphabet_index_;
  std::vector<Connective> connectives_;
  std::size_t bound_ = 0;
};

// Formula nesting depth (atoms are 0); nullopt when not a formula over `c`.
std::optional<std::size_t> formula_depth(const Value& v, const Concept& c);

struct Operator {
  std::string name;
  std::vector<std::string> domain;  // concept names
  // Values written to this operator's keys must belong to the range concept.
  std::optional<std::string> range;
  // Constructors build new individuals (Close(door_1)); fluents are looked up
  // in the world state (Status(door_1)).
  bool constructor = false;
  bool builtin = false;

  std::size_t arity() const { return domain.size(); }
};

// The triple <I, C, O>, plus the set of reified rule ids.
//
// Mutation is allowed while building; afterwards a Structure is shared as
// `std::shared_ptr<const Structure>`. Duplicate or dangling declarations are
// stored as given and reported by validate_structure().
class Structure {
 public:
  enum class NameKind { None, Individual, Concept, Operator, Rule };

  // `builtin` adds Real/Probability, arithmetic, Pr and reification concepts.
  explicit Structure(bool builtin = true);

  bool builtin() const { return builtin_; }

  void add_individual(const std::string& name);
  void add_concept(Concept c);
  void add_operator(Operator op);
  void add_rule_id(const std::string& id);

  NameKind kind_of(const std::string& name) const;
  bool has_individual(const std::string& name) const { return individual_index_.count(name) > 0; }
  const Concept* find_concept(const std::string& name) const;
  const Operator* find_operator(const std::string& name) const;
  bool has_rule_id(const std::string& id) const { return rule_ids_.count(id) > 0; }
  // True for a declared rule id or an instance id `r[...]` of one.
  bool is_rule_reference(const std::string& text) const;

  const std::vector<std::string>& individuals() const { return individuals_; }
  const std::vector<Concept>& concepts() const { return concepts_; }
  const std::vector<Operator>& operators() const { return operators_; }
  const std::set<std::string>& rule_ids() const { return rule_ids_; }

 private:
  bool builtin_;
  std::vector<std::string> individuals_;
  std::unordered_map<std::string, std::size_t> individual_index_;
  std::vector<Concept> concepts_;
  std::unordered_map<std::string, std::size_t> concept_index_;
  std::vector<Operator> operators_;
  std::unordered_map<std::string, std::size_t> operator_index_;
  std::set<std::string> rule_ids_;
};

struct Diagnostic {
  std::string invariant;  // short tag, e.g. "operator-domain"
  std::string entity;     // offending name
  std::string message;
};

// Empty iff all individual/concept/operator invariants hold.
std::vector<Diagnostic> validate_structure(const Structure& s);

}  // namespace sps
