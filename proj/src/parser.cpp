#include "ppcf/parser.hpp"

#include <charconv>
#include <cmath>
#include <set>

#include "ppcf/error.hpp"
#include "ppcf/sugar.hpp"

namespace ppcf {

namespace {

enum class Tok { Ident, Keyword, Number, Macro, Symbol, End };

struct Token {
  Tok kind;
  std::string text;
  double number = 0.0;
  std::size_t line = 1;
  std::size_t column = 1;
};

const std::set<std::string, std::less<>> kKeywords = {
    "let", "in", "fun", "ifz", "then", "else", "fix", "sample", "def", "real", "chi"};

bool is_ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool is_ident_char(char c) {
  return is_ident_start(c) || (c >= '0' && c <= '9') || c == '\'' || c == '#';
}
bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::End:
      return "end of input";
    case Tok::Number:
      return "number " + t.text;
    case Tok::Macro:
      return "macro #" + t.text;
    default:
      return "'" + t.text + "'";
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.line = line_;
      t.column = col_;
      if (pos_ >= src_.size()) {
        t.kind = Tok::End;
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      if (is_ident_start(c)) {
        std::size_t start = pos_;
        while (pos_ < src_.size() && is_ident_char(src_[pos_])) advance();
        t.text = std::string(src_.substr(start, pos_ - start));
        t.kind = kKeywords.count(t.text) ? Tok::Keyword : Tok::Ident;
      } else if (is_digit(c)) {
        lex_number(t);
      } else if (c == '#') {
        advance();
        std::size_t start = pos_;
        while (pos_ < src_.size() && (is_ident_char(src_[pos_]) && src_[pos_] != '#')) advance();
        if (pos_ == start) throw ParseError(t.line, t.column, "expected a macro name after '#'", {"name"});
        t.kind = Tok::Macro;
        t.text = std::string(src_.substr(start, pos_ - start));
      } else {
        lex_symbol(t);
      }
      out.push_back(std::move(t));
    }
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else if ((static_cast<unsigned char>(src_[pos_]) & 0xC0) != 0x80) {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        advance();
      } else if (src_.substr(pos_, 2) == "--") {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  void lex_number(Token& t) {
    std::size_t start = pos_;
    while (pos_ < src_.size() && is_digit(src_[pos_])) advance();
    if (pos_ + 1 < src_.size() && src_[pos_] == '.' && is_digit(src_[pos_ + 1])) {
      advance();
      while (pos_ < src_.size() && is_digit(src_[pos_])) advance();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_, save_col = col_;
      advance();
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) advance();
      if (pos_ < src_.size() && is_digit(src_[pos_])) {
        while (pos_ < src_.size() && is_digit(src_[pos_])) advance();
      } else {
        pos_ = save;
        col_ = save_col;
      }
    }
    t.kind = Tok::Number;
    t.text = std::string(src_.substr(start, pos_ - start));
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
    if (ec != std::errc{} || !std::isfinite(t.number))
      throw ParseError(t.line, t.column, "number literal out of range: " + t.text);
  }

  void lex_symbol(Token& t) {
    static const char* const kSymbols[] = {"->", "<=", ">=", "∪", "ℝ", "(", ")", "[", "]", "{", "}", ",",
                                           ";",  ":",  "=",  "<", ">", "+", "-", "*", "/"};
    for (const char* s : kSymbols) {
      std::string_view sv(s);
      if (src_.substr(pos_, sv.size()) == sv) {
        for (std::size_t i = 0; i < sv.size(); ++i) advance();
        t.kind = Tok::Symbol;
        t.text = std::string(sv);
        return;
      }
    }
    throw ParseError(t.line, t.column, "unexpected character '" + std::string(1, src_[pos_]) + "'");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};
class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(Lexer(src).run()) {}

  SourceProgram program(std::string_view text) {
    std::vector<std::pair<std::string, TermPtr>> surface_defs;
    std::set<std::string, std::less<>> names;
    while (is_keyword("def")) {
      next();
      const Token& name_tok = peek();
      std::string name = ident("definition name");
      if (!names.insert(name).second)
        throw ParseError(name_tok.line, name_tok.column, "duplicate definition `" + name + "`");
      expect("=");
      TermPtr body = expr();
      expect(";");
      surface_defs.emplace_back(std::move(name), std::move(body));
    }
    TermPtr main = expr();
    accept(";");
    expect_end();

    SourceProgram prog;
    prog.text = std::string(text);
    std::vector<std::pair<std::string, TermPtr>> inlined;
    for (const auto& [name, body] : surface_defs) {
      TermPtr b = body;
      for (auto it = inlined.rbegin(); it != inlined.rend(); ++it) b = substitute(b, it->first, it->second);
      inlined.emplace_back(name, b);
    }
    for (auto it = inlined.rbegin(); it != inlined.rend(); ++it) main = substitute(main, it->first, it->second);
    for (const auto& [name, body] : inlined) prog.definitions.emplace_back(name, expand_sugar(body));
    prog.main = expand_sugar(main);
    return prog;
  }

  TermPtr single_term() {
    TermPtr t = expr();
    expect_end();
    return t;
  }

  Type single_type() {
    Type t = type();
    expect_end();
    return t;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool is_symbol(std::string_view s) const { return peek().kind == Tok::Symbol && peek().text == s; }
  bool is_keyword(std::string_view s) const { return peek().kind == Tok::Keyword && peek().text == s; }
  bool accept(std::string_view s) {
    if (!is_symbol(s)) return false;
    next();
    return true;
  }

  [[noreturn]] void fail(const std::string& what, std::vector<std::string> expected) const {
    const Token& t = peek();
    throw ParseError(t.line, t.column, what + ", found " + describe(t), std::move(expected));
  }
  void expect(std::string_view s) {
    if (!accept(s)) fail("unexpected token", {"'" + std::string(s) + "'"});
  }
  void expect_keyword(std::string_view s) {
    if (!is_keyword(s)) fail("unexpected token", {"'" + std::string(s) + "'"});
    next();
  }
  void expect_end() {
    if (peek().kind != Tok::End) fail("unexpected token after expression", {"end of input"});
  }
  std::string ident(const char* role) {
    if (peek().kind != Tok::Ident) fail(std::string("expected ") + role, {"identifier"});
    std::string name = next().text;
    if (PrimitiveTable::standard().contains(name)) {
      --pos_;
      fail("primitive name used as " + std::string(role), {"identifier"});
    }
    return name;
  }

  // ---- types

  Type type_atom() {
    if (accept("(")) {
      Type t = type();
      expect(")");
      return t;
    }
    if (!is_keyword("real")) fail("expected a type", {"'real'", "'('"});
    next();
    return Type::real();
  }

  Type type() {
    Type lhs = type_atom();
    if (accept("->")) return Type::arrow(lhs, type());
    return lhs;
  }

  // ---- expressions

  TermPtr expr() {
    if (is_keyword("let")) {
      next();
      std::string x = ident("let-bound variable");
      expect("=");
      TermPtr bound = expr();
      expect_keyword("in");
      return Term::let(std::move(x), bound, expr());
    }
    if (is_keyword("fun")) {
      next();
      std::string x = ident("parameter name");
      expect(":");
      Type t = type_atom();
      expect("->");
      return Term::abs(std::move(x), t, expr());
    }
    if (is_keyword("ifz")) {
      next();
      TermPtr c = expr();
      expect_keyword("then");
      TermPtr a = expr();
      expect_keyword("else");
      return Term::ifz(c, a, expr());
    }
    if (peek().kind == Tok::Macro && peek().text == "let") {
      next();
      Term::MacroInfo info;
      info.binder = ident("let-bound variable");
      expect("=");
      TermPtr bound = expr();
      expect_keyword("in");
      return Term::macro("let", std::move(info), {bound, expr()});
    }
    return comparison();
  }

  TermPtr comparison() {
    TermPtr lhs = additive();
    for (const char* op : {"=", "<=", ">=", "<", ">"}) {
      if (accept(op)) return Term::prim(op, {lhs, additive()});
    }
    return lhs;
  }

  TermPtr additive() {
    TermPtr lhs = multiplicative();
    for (;;) {
      if (accept("+")) lhs = Term::prim("+", {lhs, multiplicative()});
      else if (accept("-")) lhs = Term::prim("-", {lhs, multiplicative()});
      else return lhs;
    }
  }

  TermPtr multiplicative() {
    TermPtr lhs = unary();
    for (;;) {
      if (accept("*")) lhs = Term::prim("*", {lhs, unary()});
      else if (accept("/")) lhs = Term::prim("/", {lhs, unary()});
      else return lhs;
    }
  }

  TermPtr unary() {
    if (accept("-")) {
      if (peek().kind == Tok::Number) return Term::numeral(-next().number);
      return Term::prim("neg", {unary()});
    }
    return application();
  }

  bool starts_atom() const {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Ident:
      case Tok::Number:
        return true;
      case Tok::Macro:
        return t.text != "let";
      case Tok::Keyword:
        return t.text == "sample" || t.text == "chi";
      case Tok::Symbol:
        return t.text == "(";
      default:
        return false;
    }
  }

  TermPtr application() {
    TermPtr head;
    if (is_keyword("fix")) {
      next();
      if (!starts_atom()) fail("expected an argument for fix", {"atom"});
      head = Term::fix(atom());
    } else {
      head = atom();
    }
    while (starts_atom()) head = Term::app(head, atom());
    return head;
  }

  std::vector<TermPtr> arguments() {
    expect("(");
    std::vector<TermPtr> args;
    if (accept(")")) return args;
    do {
      args.push_back(expr());
    } while (accept(","));
    expect(")");
    return args;
  }

  TermPtr atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number:
        return Term::numeral(next().number);
      case Tok::Ident: {
        if (PrimitiveTable::standard().contains(t.text)) {
          const Token& at = next();
          PrimRef f = PrimitiveTable::standard().at(at.text);
          std::size_t line = at.line, col = at.column;
          auto args = arguments();
          if (args.size() != f->arity) {
            throw ParseError(line, col,
                             "primitive `" + f->name + "` expects " + std::to_string(f->arity) +
                                 " argument(s), got " + std::to_string(args.size()));
          }
          return Term::prim(f, std::move(args));
        }
        return Term::var(next().text);
      }
      case Tok::Keyword:
        if (t.text == "sample") {
          next();
          return Term::sample();
        }
        if (t.text == "chi") {
          next();
          expect("[");
          IntervalSet U = set();
          expect("]");
          expect("(");
          TermPtr a = expr();
          expect(")");
          return Term::prim(chi(std::move(U)), {a});
        }
        break;
      case Tok::Macro: {
        Term::MacroInfo info;
        std::string name = next().text;
        if (accept("[")) {
          info.set = set();
          expect("]");
        }
        std::vector<TermPtr> args;
        if (is_symbol("(")) args = arguments();
        return Term::macro(std::move(name), std::move(info), std::move(args));
      }
      case Tok::Symbol:
        if (t.text == "(") {
          next();
          TermPtr e = expr();
          expect(")");
          return e;
        }
        break;
      default:
        break;
    }
    fail("expected an expression", {"number", "identifier", "'sample'", "'('", "'fun'", "'let'", "'ifz'"});
  }

  // ---- interval sets, token by token

  double set_bound() {
    bool neg = accept("-");
    if (!neg) accept("+");
    if (peek().kind == Tok::Ident && peek().text == "inf") {
      next();
      return neg ? -IntervalSet::kInf : IntervalSet::kInf;
    }
    if (peek().kind != Tok::Number) fail("expected a number", {"number", "'inf'"});
    double v = next().number;
    return neg ? -v : v;
  }

  bool is_set_separator() const {
    return is_symbol("+") || is_symbol("∪") || (peek().kind == Tok::Ident && peek().text == "U");
  }

  IntervalSet set() {
    std::vector<Interval> pieces;
    if (is_symbol("]")) return IntervalSet{};
    do {
      if (accept("{")) {
        if (!accept("}")) {
          do {
            double v = set_bound();
            pieces.push_back({v, v, true, true});
          } while (accept(","));
          expect("}");
        }
      } else if (is_symbol("[") || is_symbol("(")) {
        bool lo_closed = next().text == "[";
        const Token& start = peek();
        double lo = set_bound();
        expect(",");
        double hi = set_bound();
        bool hi_closed = false;
        if (accept("]")) hi_closed = true;
        else expect(")");
        if (lo > hi) throw ParseError(start.line, start.column, "interval with lower bound above upper bound");
        pieces.push_back({lo, hi, lo_closed, hi_closed});
      } else if (accept("ℝ") || (peek().kind == Tok::Ident && peek().text == "R" && (next(), true))) {
        pieces.push_back({-IntervalSet::kInf, IntervalSet::kInf, false, false});
      } else {
        fail("expected an interval or point set", {"'['", "'('", "'{'"});
      }
    } while (is_set_separator() && (next(), true));
    return IntervalSet(std::move(pieces));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

SourceProgram parse(std::string_view text) { return Parser(text).program(text); }

TermPtr parse_term(std::string_view text) { return Parser(text).single_term(); }

Type parse_type(std::string_view text) { return Parser(text).single_type(); }

}  // namespace ppcf
