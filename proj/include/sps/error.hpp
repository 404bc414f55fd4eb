#pragma once

#include <stdexcept>
#include <string>

namespace sps {

// Every failure raised by the library carries one of these codes so callers
// (the CLI in particular) can map them onto exit statuses and messages.
enum class ErrorCode {
  DomainViolation,    // operator argument outside its domain concept
  Arithmetic,         // division by zero, non-real operand
  NonGround,          // a variable reached a place that needs a ground term
  NotTriggered,       // apply_rule on a rule whose antecedent fails
  WriteConflict,      // two different values written to one key in one step
  RangeViolation,     // value written outside an operator's range concept
  InvalidAssignment,  // assignment missing/extra variables or out of concept
  InfiniteConcept,    // enumeration requested over a non-enumerable concept
  InvalidRule,        // rule shape invariants (assignable lhs, declarations)
  InvalidStrategy,    // cyclic preference/order, unknown ids
  InvalidDescription, // encoding description validation
  Parse,              // DSL syntax / resolution failure
  Probability,        // missing Pr annotation in strict mode
  InvalidConfig,      // engine configuration (max_steps, policy script)
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sps
