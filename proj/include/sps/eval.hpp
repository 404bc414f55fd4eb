#pragma once

#include <span>
#include <string>

#include "sps/structure.hpp"
#include "sps/term.hpp"
#include "sps/world_state.hpp"

namespace sps {

// Value of a ground term in `w`. Throws NonGround, DomainViolation, Arithmetic.
Value eval_term(const Term& t, const WorldState& w, const Structure& s);

// Positive assertions hold iff both sides are defined and equal (tuples
// componentwise); negated ones hold iff the positive form does not.
bool holds(const Assertion& a, const WorldState& w, const Structure& s);
bool holds_all(std::span<const Assertion> as, const WorldState& w, const Structure& s);

// Defined-and-equal test used by holds().
bool defined_equal(const Value& a, const Value& b);

// Deterministic, injective text of a ground term. Throws NonGround.
std::string canonical_form(const Term& t);

// The value a term denotes as syntax: literals as themselves, applications as
// compounds, quotes as reified assertions. Used for [a = b] and Pr subjects.
Value syntax_value(const Term& t);

// True if `t` can be the target of a write: a fluent (non-constructor)
// operator application, or a tuple of those.
bool is_assignable(const Term& t, const Structure& s);

// Valuation key denoted by an assignable application in `w` (arguments are
// evaluated and domain-checked).
Value eval_key(const Term& t, const WorldState& w, const Structure& s);

// Domain check for operator arguments; throws DomainViolation.
void check_domain(const Operator& op, std::span<const Value> args, const Structure& s);

}  // namespace sps
