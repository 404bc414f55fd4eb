#include "sps/structure.hpp"

#include <algorithm>
#include <map>

#include "sps/error.hpp"
#include "sps/term.hpp"

namespace sps {

namespace {

std::size_t saturating_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > kMaxEnumeration * 16 / a) return kMaxEnumeration * 16;
  return std::min(a * b, kMaxEnumeration * 16);
}

std::size_t saturating_pow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r = saturating_mul(r, base);
  return r;
}

}  // namespace

Concept Concept::explicit_set(std::string name, std::vector<Value> members) {
  Concept c;
  c.name_ = std::move(name);
  c.kind_ = Kind::Explicit;
  for (auto& m : members) {
    if (c.index_.emplace(m.text(), c.members_.size()).second) c.members_.push_back(std::move(m));
  }
  return c;
}

Concept Concept::strings(std::string name, std::vector<std::string> alphabet, std::size_t max_length) {
  Concept c;
  c.name_ = std::move(name);
  c.kind_ = Kind::Strings;
  for (auto& a : alphabet) {
    if (c.alphabet_index_.emplace(a, c.alphabet_.size()).second) c.alphabet_.push_back(std::move(a));
  }
  c.bound_ = max_length;
  return c;
}

Concept Concept::formulas(std::string name, std::vector<std::string> atoms,
                          std::vector<Connective> connectives, std::size_t max_depth) {
  Concept c;
  c.name_ = std::move(name);
  c.kind_ = Kind::Formulas;
  for (auto& a : atoms) {
    if (c.alphabet_index_.emplace(a, c.alphabet_.size()).second) c.alphabet_.push_back(std::move(a));
  }
  c.connectives_ = std::move(connectives);
  c.bound_ = max_depth;
  return c;
}

Concept Concept::builtin(std::string name, Kind kind) {
  Concept c;
  c.name_ = std::move(name);
  c.kind_ = kind;
  return c;
}

bool Concept::is_builtin() const {
  return kind_ != Kind::Explicit && kind_ != Kind::Strings && kind_ != Kind::Formulas;
}

std::optional<std::size_t> Concept::size() const {
  switch (kind_) {
    case Kind::Explicit:
      return members_.size();
    case Kind::Strings: {
      std::size_t total = 0;
      for (std::size_t k = 0; k <= bound_; ++k)
        total = std::min(total + saturating_pow(alphabet_.size(), k), kMaxEnumeration * 16);
      return total;
    }
    case Kind::Formulas: {
      std::size_t n = alphabet_.size();
      for (std::size_t d = 1; d <= bound_; ++d) {
        std::size_t next = alphabet_.size();
        for (const auto& conn : connectives_)
          next = std::min(next + saturating_pow(n, conn.arity), kMaxEnumeration * 16);
        n = next;
      }
      return n;
    }
    default:
      return std::nullopt;
  }
}

bool Concept::enumerable() const {
  auto n = size();
  return n && *n <= kMaxEnumeration;
}

std::optional<std::size_t> formula_depth(const Value& v, const Concept& c) {
  if (v.is_atom()) {
    for (const auto& a : c.alphabet())
      if (a == v.text()) return 0;
    return std::nullopt;
  }
  if (!v.is_compound()) return std::nullopt;
  for (const auto& conn : c.connectives()) {
    if (conn.name != v.head() || conn.arity != v.args().size()) continue;
    std::size_t depth = 0;
    for (const auto& arg : v.args()) {
      auto d = formula_depth(arg, c);
      if (!d) return std::nullopt;
      depth = std::max(depth, *d);
    }
    return depth + 1;
  }
  return std::nullopt;
}

bool Concept::contains(const Value& v, const Structure& s) const {
  switch (kind_) {
    case Kind::Explicit:
      return index_.count(v.text()) > 0;
    case Kind::Strings: {
      if (v.is_atom()) return alphabet_index_.count(v.text()) > 0;
      if (!v.is_seq() || v.symbols().size() > bound_) return false;
      return std::all_of(v.symbols().begin(), v.symbols().end(),
                         [&](const std::string& sym) { return alphabet_index_.count(sym) > 0; });
    }
    case Kind::Formulas: {
      auto d = formula_depth(v, *this);
      return d && *d <= bound_;
    }
    case Kind::Real:
      return v.is_real();
    case Kind::Probability:
      return v.is_real() && v.as_real() >= 0.0 && v.as_real() <= 1.0;
    case Kind::Rules:
      return v.is_atom() && s.is_rule_reference(v.text());
    case Kind::Derivations:
      if (v.is_atom()) return s.is_rule_reference(v.text());
      if (!v.is_seq()) return false;
      return std::all_of(v.symbols().begin(), v.symbols().end(),
                         [&](const std::string& sym) { return s.is_rule_reference(sym); });
    case Kind::Assertions:
      return v.is_assertion();
    case Kind::Reified: {
      if (v.is_assertion()) return true;
      if (v.is_conditional_assertion())
        return v.args().size() == 2 && v.args()[0].is_assertion() && v.args()[1].is_assertion();
      if (v.is_atom()) return s.is_rule_reference(v.text());
      if (v.is_seq())
        return std::all_of(v.symbols().begin(), v.symbols().end(),
                           [&](const std::string& sym) { return s.is_rule_reference(sym); });
      return false;
    }
  }
  return false;
}

std::vector<Value> Concept::members() const {
  switch (kind_) {
    case Kind::Explicit:
      return members_;
    case Kind::Strings: {
      if (!enumerable())
        throw Error(ErrorCode::InfiniteConcept, "concept " + name_ + " is too large to enumerate");
      std::vector<Value> out;
      std::vector<std::size_t> digits;
      for (std::size_t len = 0; len <= bound_; ++len) {
        digits.assign(len, 0);
        while (true) {
          std::vector<std::string> syms;
          for (auto d : digits) syms.push_back(alphabet_[d]);
          out.push_back(Value::seq(std::move(syms)));
          std::size_t i = len;
          while (i > 0 && ++digits[i - 1] == alphabet_.size()) digits[--i] = 0;
          if (i == 0) break;
        }
        if (alphabet_.empty()) break;
      }
      return out;
    }
    case Kind::Formulas: {
      if (!enumerable())
        throw Error(ErrorCode::InfiniteConcept, "concept " + name_ + " is too large to enumerate");
      std::vector<Value> all;
      for (const auto& a : alphabet_) all.push_back(Value::atom(a));
      for (std::size_t d = 1; d <= bound_; ++d) {
        const std::vector<Value> prev = all;
        std::vector<Value> next;
        for (const auto& a : alphabet_) next.push_back(Value::atom(a));
        for (const auto& conn : connectives_) {
          std::vector<std::size_t> idx(conn.arity, 0);
          if (prev.empty() && conn.arity > 0) continue;
          while (true) {
            std::vector<Value> args;
            for (auto i : idx) args.push_back(prev[i]);
            next.push_back(Value::compound(conn.name, std::move(args)));
            std::size_t k = conn.arity;
            while (k > 0 && ++idx[k - 1] == prev.size()) idx[--k] = 0;
            if (k == 0) break;
          }
        }
        all = std::move(next);
      }
      std::sort(all.begin(), all.end(),
                [this](const Value& a, const Value& b) { return compare(a, b) < 0; });
      return all;
    }
    default:
      throw Error(ErrorCode::InfiniteConcept, "concept " + name_ + " cannot be enumerated");
  }
}

std::weak_ordering Concept::compare(const Value& a, const Value& b) const {
  switch (kind_) {
    case Kind::Explicit: {
      auto ia = index_.find(a.text());
      auto ib = index_.find(b.text());
      std::size_t x = ia == index_.end() ? members_.size() : ia->second;
      std::size_t y = ib == index_.end() ? members_.size() : ib->second;
      if (x != y) return x <=> y;
      return a.text() <=> b.text();
    }
    case Kind::Strings: {
      auto sa = a.is_seq() || a.is_atom() ? as_sequence(a) : std::vector<std::string>{};
      auto sb = b.is_seq() || b.is_atom() ? as_sequence(b) : std::vector<std::string>{};
      if (sa.size() != sb.size()) return sa.size() <=> sb.size();
      for (std::size_t i = 0; i < sa.size(); ++i) {
        auto ia = alphabet_index_.find(sa[i]);
        auto ib = alphabet_index_.find(sb[i]);
        std::size_t x = ia == alphabet_index_.end() ? alphabet_.size() : ia->second;
        std::size_t y = ib == alphabet_index_.end() ? alphabet_.size() : ib->second;
        if (x != y) return x <=> y;
      }
      return std::weak_ordering::equivalent;
    }
    case Kind::Formulas: {
      auto da = formula_depth(a, *this).value_or(bound_ + 1);
      auto db = formula_depth(b, *this).value_or(bound_ + 1);
      if (da != db) return da <=> db;
      return a.text() <=> b.text();
    }
    case Kind::Real:
    case Kind::Probability:
      if (a.is_real() && b.is_real()) {
        if (a.as_real() < b.as_real()) return std::weak_ordering::less;
        if (a.as_real() > b.as_real()) return std::weak_ordering::greater;
        return std::weak_ordering::equivalent;
      }
      return a.text() <=> b.text();
    default:
      return a.text() <=> b.text();
  }
}

Structure::Structure(bool builtin) : builtin_(builtin) {
  add_individual("true");
  add_individual("false");
  add_individual("undefined");
  add_concept(Concept::explicit_set("Bool", {Value::truth(), Value::falsity()}));
  if (!builtin) return;
  add_concept(Concept::builtin("Real", Concept::Kind::Real));
  add_concept(Concept::builtin("Probability", Concept::Kind::Probability));
  add_concept(Concept::builtin("RuleC", Concept::Kind::Rules));
  add_concept(Concept::builtin("DerivationC", Concept::Kind::Derivations));
  add_concept(Concept::builtin("AssertionC", Concept::Kind::Assertions));
  add_concept(Concept::builtin("Reified", Concept::Kind::Reified));
  for (const char* op : {"+", "-", "*", "/"})
    add_operator({op, {"Real", "Real"}, std::nullopt, false, true});
  add_operator({kConcatOp, {}, std::nullopt, false, true});
  add_operator({kCondAssertOp, {"AssertionC", "AssertionC"}, std::nullopt, true, true});
  add_operator({"Pr", {"Reified"}, std::string("Probability"), false, true});
}

void Structure::add_individual(const std::string& name) {
  individual_index_.emplace(name, individuals_.size());
  individuals_.push_back(name);
}

void Structure::add_concept(Concept c) {
  concept_index_.emplace(c.name(), concepts_.size());
  concepts_.push_back(std::move(c));
}

void Structure::add_operator(Operator op) {
  operator_index_.emplace(op.name, operators_.size());
  operators_.push_back(std::move(op));
}

void Structure::add_rule_id(const std::string& id) { rule_ids_.insert(id); }

Structure::NameKind Structure::kind_of(const std::string& name) const {
  if (individual_index_.count(name)) return NameKind::Individual;
  if (concept_index_.count(name)) return NameKind::Concept;
  if (operator_index_.count(name)) return NameKind::Operator;
  if (rule_ids_.count(name)) return NameKind::Rule;
  return NameKind::None;
}

const Concept* Structure::find_concept(const std::string& name) const {
  auto it = concept_index_.find(name);
  return it == concept_index_.end() ? nullptr : &concepts_[it->second];
}

const Operator* Structure::find_operator(const std::string& name) const {
  auto it = operator_index_.find(name);
  return it == operator_index_.end() ? nullptr : &operators_[it->second];
}

bool Structure::is_rule_reference(const std::string& text) const {
  if (rule_ids_.count(text)) return true;
  auto br = text.find('[');
  return br != std::string::npos && text.back() == ']' && rule_ids_.count(text.substr(0, br)) > 0;
}

namespace {

void check_member(const Value& m, const Concept& c, const Structure& s, std::vector<Diagnostic>& out) {
  switch (m.kind()) {
    case Value::Kind::Atom:
      if (!s.has_individual(m.text()) && !s.has_rule_id(m.text()))
        out.push_back({"concept-member", c.name(),
                       "member '" + m.text() + "' of concept " + c.name() + " is not an individual"});
      break;
    case Value::Kind::Real:
      if (!s.builtin())
        out.push_back({"concept-member", c.name(),
                       "real member '" + m.text() + "' requires builtin reals"});
      break;
    case Value::Kind::Compound: {
      const Operator* op = s.find_operator(m.head());
      if (m.is_tuple() || m.is_assertion() || m.is_conditional_assertion()) break;
      if (!op || !op->constructor || op->arity() != m.args().size()) {
        out.push_back({"concept-member", c.name(),
                       "member '" + m.text() + "' of concept " + c.name() +
                           " is not built by a declared constructor"});
        break;
      }
      for (std::size_t i = 0; i < m.args().size(); ++i) {
        const Concept* dom = s.find_concept(op->domain[i]);
        if (dom && !dom->contains(m.args()[i], s))
          out.push_back({"concept-member", c.name(),
                         "member '" + m.text() + "' has argument outside " + op->domain[i]});
      }
      break;
    }
    case Value::Kind::Seq:
      break;
  }
}

}  // namespace

std::vector<Diagnostic> validate_structure(const Structure& s) {
  std::vector<Diagnostic> out;

  std::map<std::string, int> seen;
  for (const auto& i : s.individuals()) ++seen[i];
  for (const auto& c : s.concepts()) ++seen[c.name()];
  for (const auto& o : s.operators()) ++seen[o.name];
  for (const auto& r : s.rule_ids()) ++seen[r];
  for (const auto& [name, count] : seen)
    if (count > 1) out.push_back({"unique-names", name, "name '" + name + "' is declared more than once"});

  for (const auto& c : s.concepts()) {
    switch (c.kind()) {
      case Concept::Kind::Explicit:
        for (const auto& m : c.declared_members()) check_member(m, c, s, out);
        break;
      case Concept::Kind::Strings:
        for (const auto& a : c.alphabet())
          if (!s.has_individual(a))
            out.push_back({"concept-member", c.name(), "symbol '" + a + "' is not an individual"});
        break;
      case Concept::Kind::Formulas:
        for (const auto& a : c.alphabet())
          if (!s.has_individual(a))
            out.push_back({"concept-member", c.name(), "atom '" + a + "' is not an individual"});
        for (const auto& conn : c.connectives()) {
          const Operator* op = s.find_operator(conn.name);
          if (!op || !op->constructor || op->arity() != conn.arity)
            out.push_back({"concept-member", c.name(),
                           "connective '" + conn.name + "' is not a constructor of arity " +
                               std::to_string(conn.arity)});
        }
        break;
      default:
        break;
    }
  }

  for (const auto& op : s.operators()) {
    if (op.builtin) continue;
    for (const auto& d : op.domain)
      if (!s.find_concept(d))
        out.push_back({"operator-domain", op.name,
                       "operator " + op.name + " has unknown domain concept '" + d + "'"});
    if (op.range && !s.find_concept(*op.range))
      out.push_back({"operator-range", op.name,
                     "operator " + op.name + " has unknown range concept '" + *op.range + "'"});
  }
  return out;
}

}  // namespace sps
