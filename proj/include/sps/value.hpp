#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace sps {

// A runtime value: what a ground term evaluates to and what a valuation key is
// built from.
//
//   Atom      a named individual (door_1, true, undefined, rule ids)
//   Real      a builtin real number
//   Compound  a constructed individual: constructor applications, reified
//             assertions ("=" / "!=" / "|" heads), tuples ("()" head), and
//             valuation keys (operator head + argument values)
//   Seq       a finite sequence of atom names: strings over grammar symbols
//             and derivations over rule ids. A length-1 sequence is the atom
//             itself, so a symbol is a string and a rule is a derivation.
//
// Each value carries its canonical text, computed once at construction. Two
// values are equal iff kinds and texts are equal; the text is injective.
class Value {
 public:
  enum class Kind : std::uint8_t { Atom, Real, Compound, Seq };

  Value();  // undefined

  static Value atom(std::string name);
  static Value real(double v);
  static Value compound(std::string head, std::vector<Value> args);
  static Value tuple(std::vector<Value> items);
  static Value seq(std::vector<std::string> symbols);
  static Value boolean(bool b);

  static const Value& undefined();
  static const Value& truth();
  static const Value& falsity();

  Kind kind() const { return kind_; }
  bool is_atom() const { return kind_ == Kind::Atom; }
  bool is_real() const { return kind_ == Kind::Real; }
  bool is_compound() const { return kind_ == Kind::Compound; }
  bool is_seq() const { return kind_ == Kind::Seq; }
  bool is_tuple() const;
  bool is_undefined() const;
  // Reified assertion: compound with head "=" or "!=".
  bool is_assertion() const;
  bool is_conditional_assertion() const;

  const std::string& text() const { return text_; }
  double as_real() const { return real_; }
  // Atom name or compound head.
  const std::string& head() const;
  std::span<const Value> args() const;
  std::span<const std::string> symbols() const;

  friend bool operator==(const Value& a, const Value& b) {
    return a.kind_ == b.kind_ && a.text_ == b.text_;
  }
  friend std::strong_ordering operator<=>(const Value& a, const Value& b) {
    if (auto c = a.text_ <=> b.text_; c != 0) return c;
    return a.kind_ <=> b.kind_;
  }

 private:
  struct Payload {
    std::string head;
    std::vector<Value> args;
    std::vector<std::string> symbols;
  };

  Kind kind_ = Kind::Atom;
  double real_ = 0.0;
  std::string text_;
  std::shared_ptr<const Payload> payload_;
};

// Sequence view of an atom (one symbol) or a Seq; throws Arithmetic otherwise.
std::vector<std::string> as_sequence(const Value& v);

// Shortest round-trip decimal form, "-0" normalized to "0".
std::string format_real(double v);

}  // namespace sps

template <>
struct std::hash<sps::Value> {
  std::size_t operator()(const sps::Value& v) const noexcept {
    return std::hash<std::string>{}(v.text());
  }
};
