#pragma once

#include <cctype>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "formula.hpp"

namespace semitop {

class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t pos, const std::string &expected)
      : std::runtime_error("parse error at offset " + std::to_string(pos) +
                           ": expected " + expected),
        pos_(pos), expected_(expected) {}

  std::size_t pos() const { return pos_; }
  const std::string &expected() const { return expected_; }

private:
  std::size_t pos_;
  std::string expected_;
};

namespace detail {

enum class Tok {
  End, Ident, Value, LParen, RParen, LBrace, RBrace, Comma, Dot,
  Bang, Mod, Modal, AndOp, OrOp, XorOp, WeakArrow, StrongArrow, IffArrow, EqEq,
};

struct Token {
  Tok kind;
  std::string text; // ident / value name / modality tag
  std::size_t pos;
};

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
// Primes are legal in identifiers after the first character (v', f'),
// but not in value names or modality tags.
inline bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}
inline bool plain_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

inline std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto word = [&] {
    std::size_t b = i;
    while (i < s.size() && ident_char(s[i])) ++i;
    return std::string(s.substr(b, i - b));
  };
  auto plain_word = [&] {
    std::size_t b = i;
    while (i < s.size() && plain_char(s[i])) ++i;
    return std::string(s.substr(b, i - b));
  };
  while (i < s.size()) {
    char c = s[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') { ++i; continue; }
    std::size_t pos = i;
    if (ident_start(c)) { out.push_back({Tok::Ident, word(), pos}); continue; }
    switch (c) {
    case '\'': {
      ++i;
      std::string name = plain_word();
      if (name.empty()) throw ParseError(pos, "value name after '");
      out.push_back({Tok::Value, name, pos});
      continue;
    }
    case '%': {
      ++i;
      std::string tag = plain_word();
      if (tag != "T" && tag != "B" && tag != "F" && tag != "TB" && tag != "TF")
        throw ParseError(pos, "%T, %B, %F, %TB or %TF");
      out.push_back({Tok::Mod, tag, pos});
      continue;
    }
    case '[': {
      ++i;
      std::string tag = plain_word();
      if (i >= s.size() || s[i] != ']') throw ParseError(i, "']'");
      ++i;
      if (tag != "Q" && tag != "C" && tag != "E" && tag != "S")
        throw ParseError(pos, "[Q], [C], [E] or [S]");
      out.push_back({Tok::Modal, tag, pos});
      continue;
    }
    case '(':
      if (s.substr(i, 3) == "(+)") { out.push_back({Tok::XorOp, "", pos}); i += 3; }
      else { out.push_back({Tok::LParen, "", pos}); ++i; }
      continue;
    case ')': out.push_back({Tok::RParen, "", pos}); ++i; continue;
    case '{': out.push_back({Tok::LBrace, "", pos}); ++i; continue;
    case '}': out.push_back({Tok::RBrace, "", pos}); ++i; continue;
    case ',': out.push_back({Tok::Comma, "", pos}); ++i; continue;
    case '.': out.push_back({Tok::Dot, "", pos}); ++i; continue;
    case '!': out.push_back({Tok::Bang, "", pos}); ++i; continue;
    case '&': out.push_back({Tok::AndOp, "", pos}); ++i; continue;
    case '|': out.push_back({Tok::OrOp, "", pos}); ++i; continue;
    case '-':
      if (s.substr(i, 2) != "->") throw ParseError(pos, "'->'");
      out.push_back({Tok::WeakArrow, "", pos}); i += 2; continue;
    case '=':
      if (s.substr(i, 2) == "=>") { out.push_back({Tok::StrongArrow, "", pos}); i += 2; }
      else if (s.substr(i, 2) == "==") { out.push_back({Tok::EqEq, "", pos}); i += 2; }
      else throw ParseError(pos, "'=>' or '=='");
      continue;
    case '<':
      if (s.substr(i, 3) != "<->") throw ParseError(pos, "'<->'");
      out.push_back({Tok::IffArrow, "", pos}); i += 3; continue;
    default:
      throw ParseError(pos, "a formula token");
    }
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

inline bool is_keyword(const std::string &w) {
  return w == "bot" || w == "exists" || w == "exists01" || w == "exists1" ||
         w == "forall" || w == "correct" || w == "incorrect";
}

class Parser {
public:
  explicit Parser(std::string_view text) : toks_(lex(text)) {}

  Formula parse() {
    Formula f = imp();
    if (peek().kind != Tok::End) throw ParseError(peek().pos, "end of input");
    return f;
  }

private:
  const Token &peek(std::size_t n = 0) const {
    return toks_[std::min(i_ + n, toks_.size() - 1)];
  }
  Token next() { return toks_[std::min(i_++, toks_.size() - 1)]; }
  Token expect(Tok k, const char *what) {
    if (peek().kind != k) throw ParseError(peek().pos, what);
    return next();
  }

  static std::optional<FKind> quant_kind(const std::string &w) {
    if (w == "exists") return FKind::Exists;
    if (w == "exists01") return FKind::ExistsAffine;
    if (w == "exists1") return FKind::ExistsUnique;
    if (w == "forall") return FKind::Forall;
    return std::nullopt;
  }

  // Implications associate to the right on one tier.
  Formula imp() {
    Formula lhs = xor_();
    switch (peek().kind) {
    case Tok::WeakArrow: next(); return f_weak_imp(lhs, imp());
    case Tok::StrongArrow: next(); return f_strong_imp(lhs, imp());
    case Tok::IffArrow: next(); return f_iff(lhs, imp());
    default: return lhs;
    }
  }

  Formula xor_() {
    Formula lhs = or_();
    while (peek().kind == Tok::XorOp) { next(); lhs = f_xor(lhs, or_()); }
    return lhs;
  }

  Formula or_() {
    Formula lhs = and_();
    while (peek().kind == Tok::OrOp) { next(); lhs = f_or(lhs, and_()); }
    return lhs;
  }

  Formula and_() {
    Formula lhs = prefix();
    while (peek().kind == Tok::AndOp) { next(); lhs = f_and(lhs, prefix()); }
    return lhs;
  }

  Formula prefix() {
    // A quantifier may start any operand; its body extends maximally to
    // the right, across every infix operator ([E] exists a. output(a)).
    if (peek().kind == Tok::Ident) {
      if (auto k = quant_kind(peek().text)) {
        next();
        Token v = expect(Tok::Ident, "a variable name");
        if (is_keyword(v.text)) throw ParseError(v.pos, "a variable name");
        expect(Tok::Dot, "'.'");
        return f_quant(*k, v.text, imp());
      }
    }
    switch (peek().kind) {
    case Tok::Bang: next(); return f_neg(prefix());
    case Tok::Mod: {
      std::string tag = next().text;
      Formula a = prefix();
      if (tag == "T") return f_mod_t(a);
      if (tag == "B") return f_mod_b(a);
      if (tag == "F") return f_mod_f(a);
      if (tag == "TB") return f_mod_tb(a);
      return f_mod_tf(a);
    }
    case Tok::Modal: {
      std::string tag = next().text;
      Formula a = prefix();
      if (tag == "Q") return f_quorum(a);
      if (tag == "C") return f_contraquorum(a);
      if (tag == "E") return f_everywhere(a);
      return f_somewhere(a);
    }
    default:
      return atom();
    }
  }

  Term term() {
    if (peek().kind == Tok::Value) return t_val(next().text);
    if (peek().kind == Tok::Ident && !is_keyword(peek().text)) return t_var(next().text);
    throw ParseError(peek().pos, "a term");
  }

  Formula atom() {
    const Token &t = peek();
    switch (t.kind) {
    case Tok::LParen: {
      next();
      Formula f = imp();
      expect(Tok::RParen, "')'");
      return f;
    }
    case Tok::Value: {
      Term a = term();
      expect(Tok::EqEq, "'=='");
      return f_eq(a, term());
    }
    case Tok::Ident: {
      if (t.text == "bot") { next(); return f_bot(); }
      if (t.text == "correct" || t.text == "incorrect") {
        bool correct = t.text == "correct";
        next();
        expect(Tok::LBrace, "'{'");
        std::vector<std::string> preds;
        for (;;) {
          Token p = expect(Tok::Ident, "a predicate name");
          if (is_keyword(p.text)) throw ParseError(p.pos, "a predicate name");
          preds.push_back(p.text);
          if (peek().kind != Tok::Comma) break;
          next();
        }
        expect(Tok::RBrace, "'}'");
        return correct ? f_correct(std::move(preds)) : f_incorrect(std::move(preds));
      }
      if (is_keyword(t.text)) throw ParseError(t.pos, "an atom");
      std::string name = next().text;
      if (peek().kind == Tok::LParen) {
        next();
        Term a = term();
        expect(Tok::RParen, "')'");
        return f_pred(std::move(name), std::move(a));
      }
      expect(Tok::EqEq, "'=='");
      return f_eq(t_var(std::move(name)), term());
    }
    default:
      throw ParseError(t.pos, "an atom");
    }
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

} // namespace detail

inline Formula parse(std::string_view text) { return detail::Parser(text).parse(); }

} // namespace semitop
