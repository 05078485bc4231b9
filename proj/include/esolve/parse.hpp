#pragma once

// Recursive-descent parser for the .es surface syntax.
//
//   p or q.  p :- -K q.  q :- -K p.
//   #const x=2.  step(0..x).
//   1{o(A,T):action(A)}1 :- step(T), T<2.
//
// "-" is classical negation, "not" default negation, K/-K/M/-M the modal
// prefixes (optionally followed by "not"). K and M are reserved and cannot
// be used as variables. "%" starts a comment. The prefix "aux_" is reserved
// for internally generated atoms.

#include <cctype>
#include <string>
#include <vector>

#include "esolve/ast.hpp"

namespace esolve {

struct ParseError : std::runtime_error {
  int line;
  int column;
  std::string token;
  ParseError(int ln, int col, const std::string& msg, std::string tok)
      : std::runtime_error("parse error at " + std::to_string(ln) + ":" +
                           std::to_string(col) + ": " + msg),
        line(ln),
        column(col),
        token(std::move(tok)) {}
};

namespace detail {

enum class Tok {
  Ident, Var, Int,
  Dot, DotDot, Comma, Colon, If,  // If = ":-"
  LParen, RParen, LBrace, RBrace,
  Minus, Plus,
  Lt, Le, Gt, Ge, Eq, Ne,
  Or, Not, Const,
  End
};

struct Token {
  Tok kind;
  std::string text;
  long long value = 0;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      int ln = line_, col = col_;
      if (pos_ >= src_.size()) {
        out.push_back({Tok::End, "", 0, ln, col});
        return out;
      }
      char c = src_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        long long v = 0;
        std::string text;
        while (pos_ < src_.size() &&
               std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
          v = v * 10 + (src_[pos_] - '0');
          text += take();
        }
        out.push_back({Tok::Int, text, v, ln, col});
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string text;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                src_[pos_] == '_'))
          text += take();
        Tok k = Tok::Ident;
        if (text == "or") k = Tok::Or;
        else if (text == "not") k = Tok::Not;
        else if (std::isupper(static_cast<unsigned char>(text[0]))) k = Tok::Var;
        out.push_back({k, text, 0, ln, col});
        continue;
      }
      switch (c) {
        case '%':
          while (pos_ < src_.size() && src_[pos_] != '\n') take();
          continue;
        case '.':
          take();
          if (pos_ < src_.size() && src_[pos_] == '.') {
            take();
            out.push_back({Tok::DotDot, "..", 0, ln, col});
          } else {
            out.push_back({Tok::Dot, ".", 0, ln, col});
          }
          continue;
        case ',': take(); out.push_back({Tok::Comma, ",", 0, ln, col}); continue;
        case '(': take(); out.push_back({Tok::LParen, "(", 0, ln, col}); continue;
        case ')': take(); out.push_back({Tok::RParen, ")", 0, ln, col}); continue;
        case '{': take(); out.push_back({Tok::LBrace, "{", 0, ln, col}); continue;
        case '}': take(); out.push_back({Tok::RBrace, "}", 0, ln, col}); continue;
        case '+': take(); out.push_back({Tok::Plus, "+", 0, ln, col}); continue;
        case '-': take(); out.push_back({Tok::Minus, "-", 0, ln, col}); continue;
        case ':':
          take();
          if (pos_ < src_.size() && src_[pos_] == '-') {
            take();
            out.push_back({Tok::If, ":-", 0, ln, col});
          } else {
            out.push_back({Tok::Colon, ":", 0, ln, col});
          }
          continue;
        case '<':
          take();
          if (pos_ < src_.size() && src_[pos_] == '=') {
            take();
            out.push_back({Tok::Le, "<=", 0, ln, col});
          } else {
            out.push_back({Tok::Lt, "<", 0, ln, col});
          }
          continue;
        case '>':
          take();
          if (pos_ < src_.size() && src_[pos_] == '=') {
            take();
            out.push_back({Tok::Ge, ">=", 0, ln, col});
          } else {
            out.push_back({Tok::Gt, ">", 0, ln, col});
          }
          continue;
        case '=': take(); out.push_back({Tok::Eq, "=", 0, ln, col}); continue;
        case '!':
          take();
          if (pos_ < src_.size() && src_[pos_] == '=') {
            take();
            out.push_back({Tok::Ne, "!=", 0, ln, col});
            continue;
          }
          throw ParseError(ln, col, "stray '!'", "!");
        case '#': {
          std::string text;
          take();
          text = "#";
          while (pos_ < src_.size() &&
                 std::isalpha(static_cast<unsigned char>(src_[pos_])))
            text += take();
          if (text == "#const") {
            out.push_back({Tok::Const, text, 0, ln, col});
            continue;
          }
          throw ParseError(ln, col, "unknown directive '" + text + "'", text);
        }
        default:
          throw ParseError(ln, col, std::string("unexpected character '") + c + "'",
                           std::string(1, c));
      }
    }
  }

 private:
  char take() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }
  void skip_space() {
    while (pos_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_])))
      take();
  }
  const std::string& src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Program run() {
    Program p;
    while (peek().kind != Tok::End) {
      if (peek().kind == Tok::Const) {
        next();
        Token name = expect(Tok::Ident, "constant name");
        expect(Tok::Eq, "'='");
        Token val = expect(Tok::Int, "integer value");
        expect(Tok::Dot, "'.'");
        p.constants[name.text] = val.value;
        continue;
      }
      p.rules.push_back(rule());
    }
    return p;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  Token expect(Tok k, const std::string& what) {
    if (peek().kind != k)
      throw ParseError(peek().line, peek().column,
                       "expected " + what, peek().text);
    return next();
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(peek().line, peek().column, msg, peek().text);
  }

  static bool is_modal(const Token& t) {
    return t.kind == Tok::Var && (t.text == "K" || t.text == "M");
  }
  static bool is_cmp(Tok k) {
    return k == Tok::Lt || k == Tok::Le || k == Tok::Gt || k == Tok::Ge ||
           k == Tok::Eq || k == Tok::Ne;
  }
  static CompareOp cmp_op(Tok k) {
    switch (k) {
      case Tok::Lt: return CompareOp::Lt;
      case Tok::Le: return CompareOp::Le;
      case Tok::Gt: return CompareOp::Gt;
      case Tok::Ge: return CompareOp::Ge;
      case Tok::Eq: return CompareOp::Eq;
      default: return CompareOp::Ne;
    }
  }

  Rule rule() {
    Rule r;
    if (peek().kind == Tok::Int && peek(1).kind == Tok::LBrace) {
      r.choice = choice_head();
    } else if (peek().kind != Tok::If) {
      r.head.push_back(objective_literal());
      while (peek().kind == Tok::Or) {
        next();
        r.head.push_back(objective_literal());
      }
    }
    if (peek().kind == Tok::If) {
      next();
      body_literal(r);
      while (peek().kind == Tok::Comma) {
        next();
        body_literal(r);
      }
    }
    expect(Tok::Dot, "'.'");
    return r;
  }

  ChoiceHead choice_head() {
    ChoiceHead ch;
    ch.lower = expect(Tok::Int, "lower bound").value;
    expect(Tok::LBrace, "'{'");
    ch.elements.push_back(choice_element());
    while (peek().kind == Tok::Comma) {
      next();
      ch.elements.push_back(choice_element());
    }
    expect(Tok::RBrace, "'}'");
    ch.upper = expect(Tok::Int, "upper bound").value;
    if (ch.upper < ch.lower) fail("choice upper bound below lower bound");
    return ch;
  }

  ChoiceElement choice_element() {
    ChoiceElement e;
    e.literal = objective_literal();
    while (peek().kind == Tok::Colon) {
      next();
      e.condition.push_back(objective_literal());
    }
    return e;
  }

  void body_literal(Rule& r) {
    const Token& t = peek();
    if (t.kind == Tok::Not) {
      next();
      r.body_neg.push_back(objective_literal());
      return;
    }
    if (is_modal(t)) {
      r.body_subj.push_back(subjective_literal(false));
      return;
    }
    if (t.kind == Tok::Minus && is_modal(peek(1))) {
      next();
      r.body_subj.push_back(subjective_literal(true));
      return;
    }
    if (t.kind == Tok::Int || t.kind == Tok::Var) {
      Term l = term();
      if (!is_cmp(peek().kind)) fail("expected comparison operator");
      CompareOp op = cmp_op(next().kind);
      r.body_cmp.push_back({op, std::move(l), term()});
      return;
    }
    // identifier or classically negated atom; may still be the left side of
    // a comparison when it carries no arguments
    ObjectiveLiteral l = objective_literal();
    if (!l.negated && l.atom.args.empty() && is_cmp(peek().kind)) {
      CompareOp op = cmp_op(next().kind);
      r.body_cmp.push_back({op, Term::symbol(l.atom.predicate), term()});
      return;
    }
    r.body_pos.push_back(std::move(l));
  }

  SubjectiveLiteral subjective_literal(bool outer_negated) {
    Token m = next();  // K or M
    SubjectiveLiteral s;
    s.modality = m.text == "K" ? (outer_negated ? Modality::NotK : Modality::K)
                               : (outer_negated ? Modality::NotM : Modality::M);
    if (peek().kind == Tok::Not) {
      next();
      s.inner_negated = true;
    }
    s.literal = objective_literal();
    return s;
  }

  ObjectiveLiteral objective_literal() {
    bool neg = false;
    if (peek().kind == Tok::Minus) {
      next();
      neg = true;
    }
    Token name = expect(Tok::Ident, "predicate name");
    if (name.text.rfind("aux_", 0) == 0)
      throw ParseError(name.line, name.column,
                       "the 'aux_' prefix is reserved", name.text);
    Atom a;
    a.predicate = name.text;
    if (peek().kind == Tok::LParen) {
      next();
      a.args.push_back(term());
      while (peek().kind == Tok::Comma) {
        next();
        a.args.push_back(term());
      }
      expect(Tok::RParen, "')'");
    }
    return {std::move(a), neg};
  }

  Term term() {
    Term t = basic_term();
    if (peek().kind == Tok::DotDot) {
      next();
      return Term::interval(std::move(t), basic_term());
    }
    if (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      std::string op = next().text;
      return Term::arith(op, std::move(t), basic_term());
    }
    return t;
  }

  Term basic_term() {
    const Token& t = peek();
    if (t.kind == Tok::Int) return Term::integer(next().value);
    if (t.kind == Tok::Var) return Term::variable(next().text);
    if (t.kind == Tok::Ident) {
      std::string name = next().text;
      if (peek().kind == Tok::LParen) {
        next();
        std::vector<Term> args;
        args.push_back(term());
        while (peek().kind == Tok::Comma) {
          next();
          args.push_back(term());
        }
        expect(Tok::RParen, "')'");
        return Term::function(std::move(name), std::move(args));
      }
      return Term::symbol(std::move(name));
    }
    fail("expected term");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace detail

// Parses .es text; throws ParseError on the first malformed token.
inline Program parse(const std::string& text) {
  detail::Lexer lex(text);
  detail::Parser parser(lex.run());
  return parser.run();
}

}  // namespace esolve
