#include "sps/value.hpp"

#include <charconv>
#include <cmath>

#include "sps/error.hpp"

namespace sps {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DomainViolation: return "domain violation";
    case ErrorCode::Arithmetic: return "arithmetic error";
    case ErrorCode::NonGround: return "non-ground term";
    case ErrorCode::NotTriggered: return "rule not triggered";
    case ErrorCode::WriteConflict: return "write-write conflict";
    case ErrorCode::RangeViolation: return "range violation";
    case ErrorCode::InvalidAssignment: return "invalid assignment";
    case ErrorCode::InfiniteConcept: return "infinite concept";
    case ErrorCode::InvalidRule: return "invalid rule";
    case ErrorCode::InvalidStrategy: return "invalid strategy";
    case ErrorCode::InvalidDescription: return "invalid description";
    case ErrorCode::Parse: return "parse error";
    case ErrorCode::Probability: return "probability error";
    case ErrorCode::InvalidConfig: return "invalid configuration";
  }
  return "error";
}

std::string format_real(double v) {
  if (v == 0.0) v = 0.0;  // folds -0
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string join_texts(std::span<const Value> vs, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i) out += sep;
    out += vs[i].text();
  }
  return out;
}

}  // namespace

Value::Value() : text_("undefined") {}

Value Value::atom(std::string name) {
  Value v;
  v.kind_ = Kind::Atom;
  v.text_ = std::move(name);
  return v;
}

Value Value::real(double d) {
  Value v;
  v.kind_ = Kind::Real;
  v.real_ = d == 0.0 ? 0.0 : d;
  v.text_ = format_real(d);
  return v;
}

Value Value::compound(std::string head, std::vector<Value> args) {
  Value v;
  v.kind_ = Kind::Compound;
  if (head == "=" || head == "!=") {
    v.text_ = "[" + args.at(0).text() + head + args.at(1).text() + "]";
  } else if (head == "|") {
    v.text_ = join_texts(args, "|");
  } else if (head == "()") {
    v.text_ = "(" + join_texts(args, ",") + ")";
  } else if (args.empty()) {
    v.text_ = head;
  } else {
    v.text_ = head + "(" + join_texts(args, ",") + ")";
  }
  v.payload_ = std::make_shared<const Payload>(Payload{std::move(head), std::move(args), {}});
  return v;
}

Value Value::tuple(std::vector<Value> items) { return compound("()", std::move(items)); }

Value Value::seq(std::vector<std::string> symbols) {
  if (symbols.size() == 1) return atom(std::move(symbols.front()));
  Value v;
  v.kind_ = Kind::Seq;
  v.text_ = "\"";
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (i) v.text_ += ' ';
    v.text_ += symbols[i];
  }
  v.text_ += '"';
  v.payload_ = std::make_shared<const Payload>(Payload{{}, {}, std::move(symbols)});
  return v;
}

Value Value::boolean(bool b) { return b ? truth() : falsity(); }

const Value& Value::undefined() {
  static const Value v = atom("undefined");
  return v;
}

const Value& Value::truth() {
  static const Value v = atom("true");
  return v;
}

const Value& Value::falsity() {
  static const Value v = atom("false");
  return v;
}

bool Value::is_tuple() const { return kind_ == Kind::Compound && payload_->head == "()"; }

bool Value::is_undefined() const { return kind_ == Kind::Atom && text_ == "undefined"; }

bool Value::is_assertion() const {
  return kind_ == Kind::Compound && (payload_->head == "=" || payload_->head == "!=");
}

bool Value::is_conditional_assertion() const {
  return kind_ == Kind::Compound && payload_->head == "|";
}

const std::string& Value::head() const {
  if (kind_ == Kind::Compound) return payload_->head;
  return text_;
}

std::span<const Value> Value::args() const {
  if (kind_ != Kind::Compound) return {};
  return payload_->args;
}

std::span<const std::string> Value::symbols() const {
  if (kind_ != Kind::Seq) return {};
  return payload_->symbols;
}

std::vector<std::string> as_sequence(const Value& v) {
  if (v.is_seq()) return {v.symbols().begin(), v.symbols().end()};
  if (v.is_atom() && !v.is_undefined()) return {v.text()};
  throw Error(ErrorCode::Arithmetic, "value '" + v.text() + "' is not a sequence");
}

}  // namespace sps
