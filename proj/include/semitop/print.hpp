#pragma once

#include <string>

#include "formula.hpp"

namespace semitop {

inline std::string to_string(const Term &t) {
  return t.is_value ? "'" + t.name : t.name;
}

namespace detail {

// Binding tiers, loosest first: implications and quantifiers, (+), |, &,
// prefix operators, atoms. Used to insert the minimal parentheses that
// make printing a left inverse of parsing.
enum Prec : int { kImp = 0, kXor = 1, kOr = 2, kAnd = 3, kPrefix = 4, kAtom = 5 };

inline int prec_of(const FormulaNode &n) {
  switch (n.kind) {
  case FKind::WeakImp:
  case FKind::StrongImp:
  case FKind::Iff:
  case FKind::Exists:
  case FKind::ExistsAffine:
  case FKind::ExistsUnique:
  case FKind::Forall:
    return kImp;
  case FKind::Xor:
    return kXor;
  case FKind::Or:
    return kOr;
  case FKind::And:
    return kAnd;
  case FKind::Neg:
  case FKind::ModT:
  case FKind::ModB:
  case FKind::ModF:
  case FKind::ModTB:
  case FKind::ModTF:
  case FKind::Quorum:
  case FKind::Contraquorum:
  case FKind::Everywhere:
  case FKind::Somewhere:
    return kPrefix;
  default:
    return kAtom;
  }
}

inline void print_into(const Formula &f, int min_prec, std::string &out);

inline void print_infix(const Formula &f, const char *op, int prec, bool right_assoc,
                        int min_prec, std::string &out) {
  bool parens = prec < min_prec;
  if (parens) out += '(';
  print_into(f->lhs, right_assoc ? prec + 1 : prec, out);
  out += op;
  print_into(f->rhs, right_assoc ? prec : prec + 1, out);
  if (parens) out += ')';
}

inline void print_prefix(const Formula &f, const char *op, int min_prec, std::string &out) {
  bool parens = kPrefix < min_prec;
  if (parens) out += '(';
  out += op;
  print_into(f->lhs, kPrefix, out);
  if (parens) out += ')';
}

inline void print_quant(const Formula &f, const char *kw, int min_prec, std::string &out) {
  bool parens = kImp < min_prec;
  if (parens) out += '(';
  out += kw;
  out += ' ';
  out += f->var;
  out += ". ";
  print_into(f->lhs, kImp, out);
  if (parens) out += ')';
}

inline void print_block(const Formula &f, const char *kw, std::string &out) {
  out += kw;
  out += '{';
  for (std::size_t i = 0; i < f->preds.size(); ++i) {
    if (i) out += ',';
    out += f->preds[i];
  }
  out += '}';
}

inline void print_into(const Formula &f, int min_prec, std::string &out) {
  switch (f->kind) {
  case FKind::Bot: out += "bot"; return;
  case FKind::Neg: print_prefix(f, "!", min_prec, out); return;
  case FKind::ModT: print_prefix(f, "%T ", min_prec, out); return;
  case FKind::ModB: print_prefix(f, "%B ", min_prec, out); return;
  case FKind::ModF: print_prefix(f, "%F ", min_prec, out); return;
  case FKind::ModTB: print_prefix(f, "%TB ", min_prec, out); return;
  case FKind::ModTF: print_prefix(f, "%TF ", min_prec, out); return;
  case FKind::Quorum: print_prefix(f, "[Q] ", min_prec, out); return;
  case FKind::Contraquorum: print_prefix(f, "[C] ", min_prec, out); return;
  case FKind::Everywhere: print_prefix(f, "[E] ", min_prec, out); return;
  case FKind::Somewhere: print_prefix(f, "[S] ", min_prec, out); return;
  case FKind::And: print_infix(f, " & ", kAnd, false, min_prec, out); return;
  case FKind::Or: print_infix(f, " | ", kOr, false, min_prec, out); return;
  case FKind::Xor: print_infix(f, " (+) ", kXor, false, min_prec, out); return;
  case FKind::WeakImp: print_infix(f, " -> ", kImp, true, min_prec, out); return;
  case FKind::StrongImp: print_infix(f, " => ", kImp, true, min_prec, out); return;
  case FKind::Iff: print_infix(f, " <-> ", kImp, true, min_prec, out); return;
  case FKind::Exists: print_quant(f, "exists", min_prec, out); return;
  case FKind::ExistsAffine: print_quant(f, "exists01", min_prec, out); return;
  case FKind::ExistsUnique: print_quant(f, "exists1", min_prec, out); return;
  case FKind::Forall: print_quant(f, "forall", min_prec, out); return;
  case FKind::Pred:
    out += f->pred;
    out += '(';
    out += to_string(f->t1);
    out += ')';
    return;
  case FKind::Eq:
    out += to_string(f->t1);
    out += " == ";
    out += to_string(f->t2);
    return;
  case FKind::Correct: print_block(f, "correct", out); return;
  case FKind::Incorrect: print_block(f, "incorrect", out); return;
  }
}

} // namespace detail

inline std::string to_string(const Formula &f) {
  std::string out;
  detail::print_into(f, detail::kImp, out);
  return out;
}

} // namespace semitop
