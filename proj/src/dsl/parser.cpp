#include "sps/dsl/parser.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <set>
#include <vector>

#include "sps/error.hpp"

namespace sps::dsl {

namespace {

enum class Tok { Ident, Number, String, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  Pos pos;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

class Lexer {
 public:
  Lexer(std::string_view text, const std::string& name) : text_(text), name_(name) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      Token t;
      t.pos = {line_, col_};
      if (i_ >= text_.size()) {
        t.kind = Tok::End;
        out.push_back(t);
        return out;
      }
      char c = text_[i_];
      if (ident_start(c)) {
        t.kind = Tok::Ident;
        while (i_ < text_.size() && ident_char(text_[i_])) t.text += advance();
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '.' && i_ + 1 < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i_ + 1])))) {
        t.kind = Tok::Number;
        while (i_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[i_])) || text_[i_] == '.'))
          t.text += advance();
        if (i_ < text_.size() && (text_[i_] == 'e' || text_[i_] == 'E')) {
          t.text += advance();
          if (i_ < text_.size() && (text_[i_] == '+' || text_[i_] == '-')) t.text += advance();
          while (i_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i_]))) t.text += advance();
        }
      } else if (c == '"') {
        t.kind = Tok::String;
        advance();
        while (i_ < text_.size() && text_[i_] != '"') {
          if (text_[i_] == '\n') fail(t.pos, "unterminated string");
          t.text += advance();
        }
        if (i_ >= text_.size()) fail(t.pos, "unterminated string");
        advance();
      } else {
        t.kind = Tok::Punct;
        static const char* two[] = {"->", "!=", "++"};
        bool matched = false;
        for (const char* p : two) {
          if (text_.substr(i_, 2) == p) {
            t.text = p;
            advance();
            advance();
            matched = true;
            break;
          }
        }
        if (!matched) {
          if (std::string_view("(){}[],;:=+-*/|").find(c) == std::string_view::npos)
            fail(t.pos, std::string("unexpected character '") + c + "'");
          t.text = std::string(1, advance());
        }
      }
      out.push_back(std::move(t));
    }
  }

 private:
  [[noreturn]] void fail(Pos p, const std::string& msg) const {
    throw Error(ErrorCode::Parse,
                name_ + ":" + std::to_string(p.line) + ":" + std::to_string(p.col) + ": " + msg);
  }

  char advance() {
    char c = text_[i_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space() {
    while (i_ < text_.size()) {
      char c = text_[i_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '#' || (c == '/' && i_ + 1 < text_.size() && text_[i_ + 1] == '/')) {
        while (i_ < text_.size() && text_[i_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  const std::string& name_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

const std::set<std::string>& reserved() {
  static const std::set<std::string> r{"if", "then", "else", "and", "where"};
  return r;
}

double to_number(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

class Parser {
 public:
  Parser(std::vector<Token> toks, const std::string& name) : toks_(std::move(toks)), name_(name) {}

  Document document() {
    Document d;
    while (peek().kind != Tok::End) d.items.push_back(item());
    return d;
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(i_ + k, toks_.size() - 1)]; }
  const Token& next() {
    const Token& t = toks_[i_];
    if (i_ + 1 < toks_.size()) ++i_;
    return t;
  }
  bool at(const char* punct) const { return peek().kind == Tok::Punct && peek().text == punct; }
  bool at_word(const char* w) const { return peek().kind == Tok::Ident && peek().text == w; }
  bool accept(const char* punct) {
    if (!at(punct)) return false;
    next();
    return true;
  }
  bool accept_word(const char* w) {
    if (!at_word(w)) return false;
    next();
    return true;
  }

  [[noreturn]] void fail(Pos p, const std::string& msg) const {
    throw Error(ErrorCode::Parse,
                name_ + ":" + std::to_string(p.line) + ":" + std::to_string(p.col) + ": " + msg);
  }

  std::string describe(const Token& t) const {
    switch (t.kind) {
      case Tok::End: return "end of input";
      case Tok::String: return "string \"" + t.text + "\"";
      default: return "'" + t.text + "'";
    }
  }

  void expect(const char* punct) {
    if (!accept(punct)) fail(peek().pos, std::string("expected '") + punct + "', found " + describe(peek()));
  }
  void expect_word(const char* w) {
    if (!accept_word(w)) fail(peek().pos, std::string("expected '") + w + "', found " + describe(peek()));
  }

  std::string ident() {
    const Token& t = peek();
    if (t.kind != Tok::Ident || reserved().count(t.text))
      fail(t.pos, "expected identifier, found " + describe(t));
    return next().text;
  }

  std::vector<std::string> ident_list() {
    std::vector<std::string> out{ident()};
    while (accept(",")) out.push_back(ident());
    return out;
  }

  std::size_t natural() {
    const Token& t = peek();
    if (t.kind != Tok::Number || t.text.find_first_not_of("0123456789") != std::string::npos)
      fail(t.pos, "expected a non-negative integer, found " + describe(t));
    return static_cast<std::size_t>(std::stoull(next().text));
  }

  double real() {
    Pos p = peek().pos;
    bool neg = accept("-");
    if (peek().kind != Tok::Number) fail(p, "expected a number, found " + describe(peek()));
    double v = to_number(next().text);
    return neg ? -v : v;
  }

  Item item() {
    const Token& t = peek();
    Pos p = t.pos;
    if (t.kind != Tok::Ident) fail(p, "expected a declaration, found " + describe(t));
    std::string kw = t.text;
    if (kw == "individual") {
      next();
      IndividualDecl d{ident_list(), p};
      expect(";");
      return d;
    }
    if (kw == "concept") return concept_decl();
    if (kw == "operator" || kw == "constructor") return operator_decl();
    if (kw == "rule" || kw == "schema") return rule_decl();
    if (kw == "constant") {
      next();
      ConstantDecl d{ident_list(), p};
      expect(";");
      return d;
    }
    if (kw == "group") {
      next();
      GroupDecl d;
      d.pos = p;
      d.name = ident();
      if (accept("=")) d.members = ident_list();
      expect(";");
      return d;
    }
    if (kw == "prefer") {
      next();
      PreferDecl d;
      d.pos = p;
      d.better = ident();
      expect_word("over");
      d.worse = ident();
      expect(";");
      return d;
    }
    if (kw == "order") {
      next();
      OrderDecl d;
      d.pos = p;
      d.first = ident();
      expect_word("then");
      d.second = ident();
      expect(";");
      return d;
    }
    if (kw == "pr") {
      next();
      PrDecl d;
      d.pos = p;
      expect("(");
      d.subject = term();
      expect(")");
      expect("=");
      d.value = real();
      expect(";");
      return d;
    }
    if (kw == "init") {
      next();
      InitDecl d;
      d.pos = p;
      expect("{");
      while (!accept("}")) {
        d.facts.push_back(assertion());
        expect(";");
      }
      return d;
    }
    if (kw == "events") {
      next();
      EventsDecl d;
      d.pos = p;
      expect("{");
      while (!accept("}")) {
        EventStep s;
        s.pos = peek().pos;
        s.step = natural();
        if (s.step == 0) fail(s.pos, "event steps start at 1");
        expect(":");
        s.facts.push_back(assertion());
        while (accept(",")) s.facts.push_back(assertion());
        expect(";");
        d.steps.push_back(std::move(s));
      }
      return d;
    }
    if (kw == "config") {
      next();
      ConfigDecl d;
      d.pos = p;
      expect("{");
      while (!accept("}")) {
        ConfigEntry e;
        e.pos = peek().pos;
        e.key = ident();
        expect("=");
        const Token& v = peek();
        if (v.kind != Tok::Ident && v.kind != Tok::Number)
          fail(v.pos, "expected a config value, found " + describe(v));
        e.value = next().text;
        expect(";");
        d.entries.push_back(std::move(e));
      }
      return d;
    }
    fail(p, "unknown declaration '" + kw + "'");
  }

  ConceptDecl concept_decl() {
    ConceptDecl d;
    d.pos = next().pos;
    d.name = ident();
    expect("=");
    if (accept_word("strings")) {
      d.form = ConceptDecl::Form::Strings;
      expect("{");
      if (!at("}")) d.alphabet = ident_list();
      expect("}");
      expect_word("max");
      d.bound = natural();
    } else if (accept_word("formulas")) {
      d.form = ConceptDecl::Form::Formulas;
      expect("{");
      d.alphabet = ident_list();
      expect("}");
      expect_word("using");
      do {
        std::string c = ident();
        expect("/");
        d.connectives.emplace_back(c, natural());
      } while (accept(","));
      expect_word("depth");
      d.bound = natural();
    } else {
      expect("{");
      if (!at("}")) {
        d.members.push_back(term());
        while (accept(",")) d.members.push_back(term());
      }
      expect("}");
    }
    expect(";");
    return d;
  }

  OperatorDecl operator_decl() {
    OperatorDecl d;
    const Token& kw = next();
    d.pos = kw.pos;
    d.constructor = kw.text == "constructor";
    d.name = ident();
    if (accept("(")) {
      if (!at(")")) d.domain = ident_list();
      expect(")");
    }
    if (accept("->")) d.range = ident();
    expect(";");
    return d;
  }

  RuleDecl rule_decl() {
    RuleDecl d;
    const Token& kw = next();
    d.pos = kw.pos;
    d.schema = kw.text == "schema";
    d.id = ident();
    expect(":");
    if (!at("->")) {
      d.antecedent.push_back(assertion());
      while (accept(",")) d.antecedent.push_back(assertion());
    }
    expect("->");
    d.consequent = assertion();
    if (accept_word("where")) {
      do {
        VarDecl v;
        v.pos = peek().pos;
        v.var = ident();
        expect(":");
        v.concept_name = ident();
        d.where.push_back(std::move(v));
      } while (accept(","));
    }
    expect(";");
    return d;
  }

  AssertionExpr assertion() {
    AssertionExpr a;
    a.pos = peek().pos;
    a.lhs = term();
    if (accept("=")) {
      a.rhs = term();
    } else if (accept("!=")) {
      a.rhs = term();
      a.negated = true;
    }
    return a;
  }

  Expr infix(const std::string& op, Expr l, Expr r) {
    Expr e;
    e.kind = Expr::Kind::Infix;
    e.name = op;
    e.pos = l.pos;
    e.args = {std::move(l), std::move(r)};
    return e;
  }

  Expr term() {
    Expr e = concat();
    while (at("|")) {
      next();
      e = infix("|", std::move(e), concat());
    }
    return e;
  }

  Expr concat() {
    Expr e = additive();
    while (at("++")) {
      next();
      e = infix("++", std::move(e), additive());
    }
    return e;
  }

  Expr additive() {
    Expr e = multiplicative();
    while (at("+") || at("-")) {
      std::string op = next().text;
      e = infix(op, std::move(e), multiplicative());
    }
    return e;
  }

  Expr multiplicative() {
    Expr e = unary();
    while (at("*") || at("/")) {
      std::string op = next().text;
      e = infix(op, std::move(e), unary());
    }
    return e;
  }

  Expr unary() {
    if (at("-")) {
      Pos p = next().pos;
      if (peek().kind != Tok::Number) fail(p, "unary minus applies to number literals only");
      Expr e;
      e.kind = Expr::Kind::Number;
      e.number = -to_number(next().text);
      e.pos = p;
      return e;
    }
    return primary();
  }

  Expr primary() {
    const Token& t = peek();
    Expr e;
    e.pos = t.pos;
    if (t.kind == Tok::Number) {
      e.kind = Expr::Kind::Number;
      e.number = to_number(next().text);
      return e;
    }
    if (t.kind == Tok::String) {
      e.kind = Expr::Kind::String;
      std::string s = next().text;
      std::size_t i = 0;
      while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        if (j > i) e.symbols.push_back(s.substr(i, j - i));
        i = j;
      }
      return e;
    }
    if (accept("(")) {
      Expr first = term();
      if (!at(",")) {
        expect(")");
        return first;
      }
      e.kind = Expr::Kind::Tuple;
      e.args.push_back(std::move(first));
      while (accept(",")) e.args.push_back(term());
      expect(")");
      return e;
    }
    if (accept("[")) {
      e.kind = Expr::Kind::Quote;
      e.conds.push_back(assertion());
      expect("]");
      return e;
    }
    if (accept_word("if")) {
      e.kind = Expr::Kind::Cond;
      e.conds.push_back(assertion());
      while (accept_word("and")) e.conds.push_back(assertion());
      expect_word("then");
      e.args.push_back(term());
      expect_word("else");
      e.args.push_back(term());
      return e;
    }
    e.name = ident();
    if (accept("(")) {
      e.kind = Expr::Kind::Call;
      if (!at(")")) {
        e.args.push_back(term());
        while (accept(",")) e.args.push_back(term());
      }
      expect(")");
      return e;
    }
    if (accept("[")) {
      e.kind = Expr::Kind::InstRef;
      do {
        e.names.push_back(ident());
        expect("=");
        e.args.push_back(term());
      } while (accept(","));
      expect("]");
      return e;
    }
    e.kind = Expr::Kind::Ident;
    return e;
  }

  std::vector<Token> toks_;
  const std::string& name_;
  std::size_t i_ = 0;
};

}  // namespace

Document parse(std::string_view text, const std::string& source_name) {
  Parser p(Lexer(text, source_name).run(), source_name);
  return p.document();
}

}  // namespace sps::dsl
