#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "formula.hpp"
#include "semitopology.hpp"
#include "three.hpp"

namespace semitop {

class EvalError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A model: an ordered nonempty value set, named points carrying a
/// semitopology, and a total interpretation of every declared predicate
/// at every point and value.
class Model {
public:
  // interp[pred] is indexed [point][value]; every declared predicate must
  // carry a full matrix.
  Model(std::vector<std::string> values, std::vector<std::string> points,
        Semitopology space,
        std::map<std::string, std::vector<std::vector<TV>>> interp = {})
      : values_(std::move(values)), points_(std::move(points)),
        space_(std::move(space)), interp_(std::move(interp)) {
    if (values_.empty()) throw std::invalid_argument("model needs a nonempty value set");
    if (points_.size() != space_.point_count())
      throw std::invalid_argument("point names do not match the space");
    for (auto &[pred, table] : interp_) check_table(pred, table);
  }

  const std::vector<std::string> &values() const { return values_; }
  const std::vector<std::string> &points() const { return points_; }
  const Semitopology &space() const { return space_; }
  const std::map<std::string, std::vector<std::vector<TV>>> &interp() const { return interp_; }

  std::size_t value_index(const std::string &v) const {
    auto it = std::find(values_.begin(), values_.end(), v);
    if (it == values_.end()) throw EvalError("unknown value '" + v + "'");
    return static_cast<std::size_t>(it - values_.begin());
  }

  std::size_t point_index(const std::string &p) const {
    auto it = std::find(points_.begin(), points_.end(), p);
    if (it == points_.end()) throw EvalError("unknown point '" + p + "'");
    return static_cast<std::size_t>(it - points_.begin());
  }

  bool has_pred(const std::string &pred) const { return interp_.count(pred) > 0; }

  TV at(const std::string &pred, std::size_t point, std::size_t value) const {
    auto it = interp_.find(pred);
    if (it == interp_.end()) throw EvalError("unknown predicate '" + pred + "'");
    return it->second[point][value];
  }

  void declare(const std::string &pred, TV fill = TV::F) {
    interp_[pred].assign(points_.size(),
                         std::vector<TV>(values_.size(), fill));
  }

  void set(const std::string &pred, std::size_t point, std::size_t value, TV tv) {
    auto it = interp_.find(pred);
    if (it == interp_.end()) throw EvalError("unknown predicate '" + pred + "'");
    it->second[point][value] = tv;
  }

  void set(const std::string &pred, const std::string &point, const std::string &value, TV tv) {
    set(pred, point_index(point), value_index(value), tv);
  }

private:
  void check_table(const std::string &pred,
                   const std::vector<std::vector<TV>> &table) const {
    if (table.size() != points_.size())
      throw std::invalid_argument("interpretation of '" + pred + "' is not total over points");
    for (const auto &row : table)
      if (row.size() != values_.size())
        throw std::invalid_argument("interpretation of '" + pred + "' is not total over values");
  }

  std::vector<std::string> values_;
  std::vector<std::string> points_;
  Semitopology space_;
  std::map<std::string, std::vector<std::vector<TV>>> interp_;
};

namespace detail {

inline std::string resolve_value(const Term &t) {
  if (!t.is_value) throw EvalError("free variable '" + t.name + "'");
  return t.name;
}

} // namespace detail

/// Three-valued denotation. Every constructor evaluates directly (the
/// derived ones through their kernel operations), so desugaring and direct
/// evaluation give two independent routes to each truth value.
inline TV denote(const Model &m, const Formula &f, std::size_t p) {
  auto sub = [&](const Formula &g) { return denote(m, g, p); };
  auto spatial = [&](const Formula &g) {
    return [&m, &g](std::size_t q) { return denote(m, g, q); };
  };
  auto quant_insts = [&](const Formula &q) {
    std::vector<TV> out;
    out.reserve(m.values().size());
    for (const auto &v : m.values())
      out.push_back(denote(m, substitute(q->lhs, q->var, v), p));
    return out;
  };
  auto exists01 = [&](const std::vector<TV> &inst) {
    TV acc = TV::T;
    for (std::size_t v = 0; v < inst.size(); ++v)
      for (std::size_t w = 0; w < inst.size(); ++w)
        acc = tv_and(acc, weak_imp(tv_and(inst[v], inst[w]), tv_of(v == w)));
    return acc;
  };

  switch (f->kind) {
  case FKind::Bot: return TV::F;
  case FKind::Neg: return tv_neg(sub(f->lhs));
  case FKind::And: return tv_and(sub(f->lhs), sub(f->rhs));
  case FKind::Or: return tv_or(sub(f->lhs), sub(f->rhs));
  case FKind::WeakImp: return weak_imp(sub(f->lhs), sub(f->rhs));
  case FKind::StrongImp: return strong_imp(sub(f->lhs), sub(f->rhs));
  case FKind::Xor: return tv_xor(sub(f->lhs), sub(f->rhs));
  case FKind::Iff: return tv_iff(sub(f->lhs), sub(f->rhs));
  case FKind::ModT: return mod_t(sub(f->lhs));
  case FKind::ModB: return mod_b(sub(f->lhs));
  case FKind::ModF: return mod_f(sub(f->lhs));
  case FKind::ModTB: return mod_tb(sub(f->lhs));
  case FKind::ModTF: return mod_tf(sub(f->lhs));
  case FKind::Quorum: return m.space().quorum(spatial(f->lhs));
  case FKind::Contraquorum: return m.space().contraquorum(spatial(f->lhs));
  case FKind::Everywhere: return m.space().everywhere(spatial(f->lhs));
  case FKind::Somewhere: return m.space().somewhere(spatial(f->lhs));
  case FKind::Exists: return fold_or(quant_insts(f));
  case FKind::Forall: return fold_and(quant_insts(f));
  case FKind::ExistsAffine: return exists01(quant_insts(f));
  case FKind::ExistsUnique: {
    auto inst = quant_insts(f);
    return tv_and(exists01(inst), fold_or(inst));
  }
  case FKind::Pred: {
    std::string v = detail::resolve_value(f->t1);
    if (!m.has_pred(f->pred)) throw EvalError("unknown predicate '" + f->pred + "'");
    return m.at(f->pred, p, m.value_index(v));
  }
  case FKind::Eq:
    return tv_of(detail::resolve_value(f->t1) == detail::resolve_value(f->t2));
  case FKind::Correct:
  case FKind::Incorrect: {
    TV acc = TV::T;
    for (const auto &pred : f->preds) {
      if (!m.has_pred(pred)) throw EvalError("unknown predicate '" + pred + "'");
      for (std::size_t v = 0; v < m.values().size(); ++v) {
        TV x = m.at(pred, p, v);
        acc = tv_and(acc, f->kind == FKind::Correct ? mod_tf(x) : mod_b(x));
      }
    }
    return acc;
  }
  }
  throw std::logic_error("unreachable");
}

inline TV denote(const Model &m, const Formula &f, const std::string &point) {
  return denote(m, f, m.point_index(point));
}

inline bool holds_at(const Model &m, const Formula &f, std::size_t p) {
  return is_valid(denote(m, f, p));
}

inline bool is_valid_in_model(const Model &m, const Formula &f) {
  for (std::size_t p = 0; p < m.space().point_count(); ++p)
    if (!holds_at(m, f, p)) return false;
  return true;
}

/// Every free variable replaced by every element of its domain (default the
/// full value set), variables in name order, later variables cycling fastest.
inline std::vector<Formula> universal_closure_instances(
    const Model &m, const Formula &f,
    const std::map<std::string, std::vector<std::string>> &domains = {}) {
  std::vector<std::string> vars;
  for (const auto &v : free_vars(f)) vars.push_back(v);

  std::vector<std::vector<std::string>> choice;
  for (const auto &v : vars) {
    auto it = domains.find(v);
    const std::vector<std::string> &dom = it != domains.end() ? it->second : m.values();
    for (const auto &val : dom) m.value_index(val); // reject foreign values
    if (dom.empty()) return {};
    choice.push_back(dom);
  }

  std::vector<Formula> out;
  std::vector<std::size_t> idx(vars.size(), 0);
  for (;;) {
    Formula inst = f;
    for (std::size_t i = 0; i < vars.size(); ++i)
      inst = substitute(inst, vars[i], choice[i][idx[i]]);
    out.push_back(std::move(inst));
    std::size_t i = vars.size();
    while (i > 0 && ++idx[i - 1] == choice[i - 1].size()) idx[--i] = 0;
    if (i == 0) break;
  }
  return out;
}

} // namespace semitop
