#pragma once

#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace semitop {

/// Formula constructors. The core fragment is Bot, Neg, And, Quorum,
/// Everywhere, Exists, ExistsAffine, ModTF, Pred and Eq; everything else
/// desugars onto it. Everywhere is core because no combination of Quorum
/// and the connectives reproduces the meet over all points on a general
/// basis; Somewhere and Contraquorum are its and Quorum's de Morgan duals.
enum class FKind {
  Bot,
  Neg,
  And,
  Or,
  WeakImp,
  StrongImp,
  Xor,
  Iff,
  ModT,
  ModB,
  ModF,
  ModTB,
  ModTF,
  Quorum,
  Contraquorum,
  Everywhere,
  Somewhere,
  Exists,
  ExistsAffine,
  ExistsUnique,
  Forall,
  Pred,
  Eq,
  Correct,
  Incorrect,
};

/// A term is a variable or a value literal; there are no function symbols.
struct Term {
  bool is_value = false;
  std::string name;
  friend bool operator==(const Term &, const Term &) = default;
};

inline Term t_var(std::string name) { return {false, std::move(name)}; }
inline Term t_val(std::string name) { return {true, std::move(name)}; }

struct FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

struct FormulaNode {
  FKind kind = FKind::Bot;
  Formula lhs, rhs;               // operands; unary connectives use lhs
  std::string var;                // bound variable of a quantifier
  std::string pred;               // predicate symbol of Pred
  std::vector<std::string> preds; // predicate list of Correct/Incorrect
  Term t1, t2;                    // Pred argument (t1) or Eq operands
};

namespace detail {
inline Formula mk(FormulaNode n) { return std::make_shared<FormulaNode>(std::move(n)); }
} // namespace detail

inline Formula f_bot() { return detail::mk({}); }

inline Formula f_unary(FKind k, Formula a) {
  FormulaNode n;
  n.kind = k;
  n.lhs = std::move(a);
  return detail::mk(std::move(n));
}

inline Formula f_binary(FKind k, Formula a, Formula b) {
  FormulaNode n;
  n.kind = k;
  n.lhs = std::move(a);
  n.rhs = std::move(b);
  return detail::mk(std::move(n));
}

inline Formula f_neg(Formula a) { return f_unary(FKind::Neg, std::move(a)); }
inline Formula f_and(Formula a, Formula b) { return f_binary(FKind::And, std::move(a), std::move(b)); }
inline Formula f_or(Formula a, Formula b) { return f_binary(FKind::Or, std::move(a), std::move(b)); }
inline Formula f_weak_imp(Formula a, Formula b) { return f_binary(FKind::WeakImp, std::move(a), std::move(b)); }
inline Formula f_strong_imp(Formula a, Formula b) { return f_binary(FKind::StrongImp, std::move(a), std::move(b)); }
inline Formula f_xor(Formula a, Formula b) { return f_binary(FKind::Xor, std::move(a), std::move(b)); }
inline Formula f_iff(Formula a, Formula b) { return f_binary(FKind::Iff, std::move(a), std::move(b)); }
inline Formula f_mod_t(Formula a) { return f_unary(FKind::ModT, std::move(a)); }
inline Formula f_mod_b(Formula a) { return f_unary(FKind::ModB, std::move(a)); }
inline Formula f_mod_f(Formula a) { return f_unary(FKind::ModF, std::move(a)); }
inline Formula f_mod_tb(Formula a) { return f_unary(FKind::ModTB, std::move(a)); }
inline Formula f_mod_tf(Formula a) { return f_unary(FKind::ModTF, std::move(a)); }
inline Formula f_quorum(Formula a) { return f_unary(FKind::Quorum, std::move(a)); }
inline Formula f_contraquorum(Formula a) { return f_unary(FKind::Contraquorum, std::move(a)); }
inline Formula f_everywhere(Formula a) { return f_unary(FKind::Everywhere, std::move(a)); }
inline Formula f_somewhere(Formula a) { return f_unary(FKind::Somewhere, std::move(a)); }

inline Formula f_quant(FKind k, std::string var, Formula body) {
  FormulaNode n;
  n.kind = k;
  n.lhs = std::move(body);
  n.var = std::move(var);
  return detail::mk(std::move(n));
}

inline Formula f_exists(std::string var, Formula body) { return f_quant(FKind::Exists, std::move(var), std::move(body)); }
inline Formula f_exists01(std::string var, Formula body) { return f_quant(FKind::ExistsAffine, std::move(var), std::move(body)); }
inline Formula f_exists1(std::string var, Formula body) { return f_quant(FKind::ExistsUnique, std::move(var), std::move(body)); }
inline Formula f_forall(std::string var, Formula body) { return f_quant(FKind::Forall, std::move(var), std::move(body)); }

inline Formula f_pred(std::string sym, Term arg) {
  FormulaNode n;
  n.kind = FKind::Pred;
  n.pred = std::move(sym);
  n.t1 = std::move(arg);
  return detail::mk(std::move(n));
}

inline Formula f_eq(Term a, Term b) {
  FormulaNode n;
  n.kind = FKind::Eq;
  n.t1 = std::move(a);
  n.t2 = std::move(b);
  return detail::mk(std::move(n));
}

inline Formula f_block(FKind k, std::vector<std::string> preds) {
  if (preds.empty()) throw std::invalid_argument("correct{}/incorrect{} needs at least one predicate");
  FormulaNode n;
  n.kind = k;
  n.preds = std::move(preds);
  return detail::mk(std::move(n));
}

inline Formula f_correct(std::vector<std::string> preds) {
  return f_block(FKind::Correct, std::move(preds));
}

inline Formula f_incorrect(std::vector<std::string> preds) {
  return f_block(FKind::Incorrect, std::move(preds));
}

inline bool ast_equal(const Formula &a, const Formula &b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->var != b->var || a->pred != b->pred ||
      a->preds != b->preds || !(a->t1 == b->t1) || !(a->t2 == b->t2))
    return false;
  return ast_equal(a->lhs, b->lhs) && ast_equal(a->rhs, b->rhs);
}

inline void collect_free_vars(const Formula &f, std::set<std::string> &bound,
                              std::set<std::string> &out) {
  if (!f) return;
  switch (f->kind) {
  case FKind::Pred:
    if (!f->t1.is_value && !bound.count(f->t1.name)) out.insert(f->t1.name);
    return;
  case FKind::Eq:
    if (!f->t1.is_value && !bound.count(f->t1.name)) out.insert(f->t1.name);
    if (!f->t2.is_value && !bound.count(f->t2.name)) out.insert(f->t2.name);
    return;
  case FKind::Exists:
  case FKind::ExistsAffine:
  case FKind::ExistsUnique:
  case FKind::Forall: {
    bool was_bound = bound.count(f->var) > 0;
    bound.insert(f->var);
    collect_free_vars(f->lhs, bound, out);
    if (!was_bound) bound.erase(f->var);
    return;
  }
  default:
    collect_free_vars(f->lhs, bound, out);
    collect_free_vars(f->rhs, bound, out);
    return;
  }
}

inline std::set<std::string> free_vars(const Formula &f) {
  std::set<std::string> bound, out;
  collect_free_vars(f, bound, out);
  return out;
}

/// Free occurrences of `var` become the value literal `value`. Only values
/// are ever substituted, so capture cannot happen.
inline Formula substitute(const Formula &f, const std::string &var, const std::string &value) {
  if (!f) return f;
  auto sub_term = [&](const Term &t) {
    return (!t.is_value && t.name == var) ? t_val(value) : t;
  };
  switch (f->kind) {
  case FKind::Pred:
    return f_pred(f->pred, sub_term(f->t1));
  case FKind::Eq:
    return f_eq(sub_term(f->t1), sub_term(f->t2));
  case FKind::Exists:
  case FKind::ExistsAffine:
  case FKind::ExistsUnique:
  case FKind::Forall:
    if (f->var == var) return f;
    return f_quant(f->kind, f->var, substitute(f->lhs, var, value));
  case FKind::Bot:
  case FKind::Correct:
  case FKind::Incorrect:
    return f;
  default: {
    FormulaNode n = *f;
    n.lhs = substitute(f->lhs, var, value);
    n.rhs = substitute(f->rhs, var, value);
    return detail::mk(std::move(n));
  }
  }
}

inline bool is_core(const Formula &f) {
  if (!f) return true;
  switch (f->kind) {
  case FKind::Bot:
  case FKind::Neg:
  case FKind::And:
  case FKind::Quorum:
  case FKind::Everywhere:
  case FKind::Exists:
  case FKind::ExistsAffine:
  case FKind::ModTF:
  case FKind::Pred:
  case FKind::Eq:
    return is_core(f->lhs) && is_core(f->rhs);
  default:
    return false;
  }
}

/// Rewrite onto the core fragment; semantics-preserving (property-tested
/// against direct evaluation of the derived constructors).
inline Formula desugar(const Formula &f) {
  if (!f) return f;
  auto a = [&] { return desugar(f->lhs); };
  auto b = [&] { return desugar(f->rhs); };
  switch (f->kind) {
  case FKind::Bot:
  case FKind::Pred:
  case FKind::Eq:
    return f;
  case FKind::Neg:
    return f_neg(a());
  case FKind::And:
    return f_and(a(), b());
  case FKind::Quorum:
    return f_quorum(a());
  case FKind::Everywhere:
    return f_everywhere(a());
  case FKind::ModTF:
    return f_mod_tf(a());
  case FKind::Exists:
    return f_exists(f->var, a());
  case FKind::ExistsAffine:
    return f_exists01(f->var, a());
  case FKind::Or:
    return f_neg(f_and(f_neg(a()), f_neg(b())));
  case FKind::WeakImp:
    return desugar(f_or(f_neg(f->lhs), f->rhs));
  case FKind::StrongImp:
    return desugar(f_weak_imp(f->lhs, f_mod_t(f->rhs)));
  case FKind::Xor:
    return desugar(f_or(f_and(f->lhs, f_neg(f->rhs)), f_and(f_neg(f->lhs), f->rhs)));
  case FKind::Iff:
    return desugar(f_or(f_or(f_and(f_mod_t(f->lhs), f_mod_t(f->rhs)),
                             f_and(f_mod_b(f->lhs), f_mod_b(f->rhs))),
                        f_and(f_mod_f(f->lhs), f_mod_f(f->rhs))));
  case FKind::ModT:
    return f_and(f_mod_tf(a()), a());
  case FKind::ModB:
    return f_neg(f_mod_tf(a()));
  case FKind::ModF:
    return desugar(f_mod_t(f_neg(f->lhs)));
  case FKind::ModTB:
    return desugar(f_neg(f_mod_t(f_neg(f->lhs))));
  case FKind::Contraquorum:
    return f_neg(f_quorum(f_neg(a())));
  case FKind::Somewhere:
    return f_neg(f_everywhere(f_neg(a())));
  case FKind::Forall:
    return f_neg(f_exists(f->var, f_neg(a())));
  case FKind::ExistsUnique:
    return f_and(f_exists01(f->var, a()), f_exists(f->var, a()));
  case FKind::Correct:
  case FKind::Incorrect: {
    Formula acc;
    for (const auto &p : f->preds) {
      Formula body = f_pred(p, t_var("a"));
      body = f->kind == FKind::Correct ? f_mod_tf(body) : f_mod_b(body);
      Formula one = desugar(f_forall("a", body));
      acc = acc ? f_and(acc, one) : one;
    }
    return acc;
  }
  }
  throw std::logic_error("unreachable");
}

} // namespace semitop
