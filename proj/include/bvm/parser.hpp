#pragma once

#include <cctype>
#include <string>
#include <vector>

#include "bvm/ast.hpp"
#include "bvm/signature.hpp"

// Recursive-descent parser for the ASCII formula grammar:
//
//   iff     := implies ("<->" implies)*            left-associative
//   implies := or ("->" implies)?                  right-associative
//   or      := and ("|" and)*
//   and     := unary ("&" unary)*
//   unary   := "~" unary | ("all"|"ex") VAR iff | primary
//   primary := "(" iff ")" | "true" | "false"
//            | REL "(" term ("," term)* ")"
//            | term ("=" | "!=") term
//   term    := IDENT | CONST | FUNC "(" term ("," term)* ")"
//
// Quantifiers extend maximally to the right. `t1 != t2` is sugar for
// `~(t1 = t2)`. Identifiers not declared in the signature are variables.

namespace bvm {

namespace detail {

enum class Tok { End, Ident, LParen, RParen, Comma, Eq, Neq, And, Or, Not, Implies, Iff };

struct Token {
  Tok kind;
  std::string text;
  size_t pos;
};

class Lexer {
 public:
  explicit Lexer(const std::string& input) : in_(input) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (i_ < in_.size() && std::isspace(static_cast<unsigned char>(in_[i_]))) ++i_;
    size_t start = i_;
    if (i_ >= in_.size()) {
      tok_ = {Tok::End, "", start};
      return;
    }
    char c = in_[i_];
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t j = i_;
      while (j < in_.size() &&
             (std::isalnum(static_cast<unsigned char>(in_[j])) || in_[j] == '_'))
        ++j;
      tok_ = {Tok::Ident, in_.substr(i_, j - i_), start};
      i_ = j;
      return;
    }
    auto two = [&](const char* s) {
      return i_ + 1 < in_.size() && in_[i_] == s[0] && in_[i_ + 1] == s[1];
    };
    if (i_ + 2 < in_.size() && in_[i_] == '<' && in_[i_ + 1] == '-' && in_[i_ + 2] == '>') {
      tok_ = {Tok::Iff, "<->", start};
      i_ += 3;
      return;
    }
    if (two("->")) { tok_ = {Tok::Implies, "->", start}; i_ += 2; return; }
    if (two("!=")) { tok_ = {Tok::Neq, "!=", start}; i_ += 2; return; }
    switch (c) {
      case '(': tok_ = {Tok::LParen, "(", start}; ++i_; return;
      case ')': tok_ = {Tok::RParen, ")", start}; ++i_; return;
      case ',': tok_ = {Tok::Comma, ",", start}; ++i_; return;
      case '=': tok_ = {Tok::Eq, "=", start}; ++i_; return;
      case '&': tok_ = {Tok::And, "&", start}; ++i_; return;
      case '|': tok_ = {Tok::Or, "|", start}; ++i_; return;
      case '~': tok_ = {Tok::Not, "~", start}; ++i_; return;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", start);
    }
  }

  const std::string& in_;
  size_t i_ = 0;
  Token tok_;
};

class FormulaParser {
 public:
  FormulaParser(const std::string& input, const Signature& sig)
      : lex_(input), sig_(sig) {}

  Formula parse() {
    Formula f = parse_iff();
    if (lex_.peek().kind != Tok::End)
      throw ParseError("unexpected trailing input '" + lex_.peek().text + "'",
                       lex_.peek().pos);
    return f;
  }

 private:
  Formula parse_iff() {
    Formula f = parse_implies();
    while (lex_.peek().kind == Tok::Iff) {
      lex_.take();
      f = iff(f, parse_implies());
    }
    return f;
  }

  Formula parse_implies() {
    Formula f = parse_or();
    if (lex_.peek().kind == Tok::Implies) {
      lex_.take();
      return implies(f, parse_implies());
    }
    return f;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (lex_.peek().kind == Tok::Or) {
      lex_.take();
      f = lor(f, parse_and());
    }
    return f;
  }

  Formula parse_and() {
    Formula f = parse_unary();
    while (lex_.peek().kind == Tok::And) {
      lex_.take();
      f = land(f, parse_unary());
    }
    return f;
  }

  Formula parse_unary() {
    const Token& t = lex_.peek();
    if (t.kind == Tok::Not) {
      lex_.take();
      return neg(parse_unary());
    }
    if (t.kind == Tok::Ident && (t.text == "all" || t.text == "ex")) {
      Token q = lex_.take();
      Token v = lex_.take();
      if (v.kind != Tok::Ident)
        throw ParseError("expected variable after '" + q.text + "'", v.pos);
      if (reserved_word(v.text))
        throw ParseError("cannot bind reserved word '" + v.text + "'", v.pos);
      if (sig_.has_symbol(v.text))
        throw ParseError("cannot bind signature symbol '" + v.text + "'", v.pos);
      Formula body = parse_iff();  // scope extends maximally right
      return q.text == "all" ? forall(v.text, body) : exists(v.text, body);
    }
    return parse_primary();
  }

  Formula parse_primary() {
    const Token& t = lex_.peek();
    if (t.kind == Tok::LParen) {
      lex_.take();
      Formula f = parse_iff();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (t.kind != Tok::Ident)
      throw ParseError("expected formula, got '" + t.text + "'", t.pos);
    if (t.text == "true") { lex_.take(); return truth(); }
    if (t.text == "false") { lex_.take(); return falsity(); }
    if (t.text == "all" || t.text == "ex") return parse_unary();

    // Relation atom?
    int rel = sig_.relation_index(t.text);
    if (rel >= 0) {
      Token name = lex_.take();
      if (lex_.peek().kind != Tok::LParen)
        throw ParseError("relation symbol '" + name.text + "' needs arguments", name.pos);
      std::vector<Term> args = parse_args();
      int arity = sig_.relations[rel].second;
      if (static_cast<int>(args.size()) != arity)
        throw ParseError("relation '" + name.text + "' expects " +
                             std::to_string(arity) + " argument(s), got " +
                             std::to_string(args.size()),
                         name.pos);
      return atom(name.text, std::move(args));
    }

    // Otherwise an equality between terms.
    Term lhs = parse_term();
    Token op = lex_.take();
    if (op.kind == Tok::Eq) return eq(lhs, parse_term());
    if (op.kind == Tok::Neq) return neg(eq(lhs, parse_term()));
    throw ParseError("expected '=' or '!=' after term", op.pos);
  }

  std::vector<Term> parse_args() {
    expect(Tok::LParen, "'('");
    std::vector<Term> args;
    args.push_back(parse_term());
    while (lex_.peek().kind == Tok::Comma) {
      lex_.take();
      args.push_back(parse_term());
    }
    expect(Tok::RParen, "')'");
    return args;
  }

  Term parse_term() {
    Token t = lex_.take();
    if (t.kind != Tok::Ident)
      throw ParseError("expected term, got '" + t.text + "'", t.pos);
    if (reserved_word(t.text))
      throw ParseError("reserved word '" + t.text + "' cannot be a term", t.pos);
    if (sig_.relation_index(t.text) >= 0)
      throw ParseError("relation symbol '" + t.text + "' used as a term", t.pos);
    int fn = sig_.function_index(t.text);
    if (fn >= 0) {
      if (lex_.peek().kind != Tok::LParen)
        throw ParseError("function symbol '" + t.text + "' needs arguments", t.pos);
      std::vector<Term> args = parse_args();
      int arity = sig_.functions[fn].second;
      if (static_cast<int>(args.size()) != arity)
        throw ParseError("function '" + t.text + "' expects " +
                             std::to_string(arity) + " argument(s), got " +
                             std::to_string(args.size()),
                         t.pos);
      return app(t.text, std::move(args));
    }
    if (lex_.peek().kind == Tok::LParen)
      throw ParseError("unknown symbol '" + t.text + "'", t.pos);
    if (sig_.constant_index(t.text) >= 0) return cnst(t.text);
    return var(t.text);
  }

  void expect(Tok kind, const char* what) {
    Token t = lex_.take();
    if (t.kind != kind)
      throw ParseError(std::string("expected ") + what + ", got '" + t.text + "'",
                       t.pos);
  }

  Lexer lex_;
  const Signature& sig_;
};

}  // namespace detail

/// Parse a formula against a signature. Undeclared identifiers are variables;
/// syntax errors, unknown applied symbols, and arity mismatches throw
/// ParseError with the byte offset.
inline Formula parse_formula(const std::string& text, const Signature& sig) {
  return detail::FormulaParser(text, sig).parse();
}

}  // namespace bvm
