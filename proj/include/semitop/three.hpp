#pragma once

#include <array>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

namespace semitop {

/// The three-element truth-value lattice F < B < T.
/// B reads as "both": the truth-value of byzantine behaviour.
enum class TV : std::uint8_t { F = 0, B = 1, T = 2 };

inline constexpr std::array<TV, 3> all_tv{TV::F, TV::B, TV::T};

constexpr std::size_t idx(TV a) { return static_cast<std::size_t>(a); }

/// Valid means "true enough": T or B.
constexpr bool is_valid(TV a) { return a != TV::F; }

constexpr bool leq(TV a, TV b) { return idx(a) <= idx(b); }

namespace detail {

using Unary = std::array<TV, 3>;
using Binary = std::array<std::array<TV, 3>, 3>;

// Tables are indexed [F, B, T]; the first index is the left argument.
constexpr TV F = TV::F, B = TV::B, T = TV::T;

constexpr Unary neg_tab{T, B, F};
constexpr Unary mod_t_tab{F, F, T};
constexpr Unary mod_b_tab{F, T, F};
constexpr Unary mod_f_tab{T, F, F};
constexpr Unary mod_tb_tab{F, T, T};
constexpr Unary mod_tf_tab{T, F, T};

constexpr Binary and_tab{{{F, F, F}, {F, B, B}, {F, B, T}}};
constexpr Binary or_tab{{{F, B, T}, {B, B, T}, {T, T, T}}};
constexpr Binary weak_imp_tab{{{T, T, T}, {B, B, T}, {F, B, T}}};
constexpr Binary strong_imp_tab{{{T, T, T}, {B, B, T}, {F, F, T}}};
constexpr Binary iff_tab{{{T, F, F}, {F, T, F}, {F, F, T}}};
constexpr Binary xor_tab{{{F, B, T}, {B, B, B}, {T, B, F}}};

} // namespace detail

constexpr TV tv_neg(TV a) { return detail::neg_tab[idx(a)]; }
constexpr TV mod_t(TV a) { return detail::mod_t_tab[idx(a)]; }
constexpr TV mod_b(TV a) { return detail::mod_b_tab[idx(a)]; }
constexpr TV mod_f(TV a) { return detail::mod_f_tab[idx(a)]; }
constexpr TV mod_tb(TV a) { return detail::mod_tb_tab[idx(a)]; }
constexpr TV mod_tf(TV a) { return detail::mod_tf_tab[idx(a)]; }

constexpr TV tv_and(TV a, TV b) { return detail::and_tab[idx(a)][idx(b)]; }
constexpr TV tv_or(TV a, TV b) { return detail::or_tab[idx(a)][idx(b)]; }
constexpr TV weak_imp(TV a, TV b) { return detail::weak_imp_tab[idx(a)][idx(b)]; }
constexpr TV strong_imp(TV a, TV b) { return detail::strong_imp_tab[idx(a)][idx(b)]; }
constexpr TV tv_iff(TV a, TV b) { return detail::iff_tab[idx(a)][idx(b)]; }
constexpr TV tv_xor(TV a, TV b) { return detail::xor_tab[idx(a)][idx(b)]; }

/// Lattice meet and join; agreement with the conjunction and disjunction
/// tables is one of the kernel laws under test.
constexpr TV meet(TV a, TV b) { return leq(a, b) ? a : b; }
constexpr TV join(TV a, TV b) { return leq(a, b) ? b : a; }

/// Equality-as-a-connective on truth values: T when equal, F otherwise.
constexpr TV eq_tv(TV a, TV b) { return a == b ? TV::T : TV::F; }

/// Two-valued embedding; value equality never yields B.
constexpr TV tv_of(bool b) { return b ? TV::T : TV::F; }

/// fold_and over an empty range is T; fold_or over an empty range is F.
template <typename Range> TV fold_and(const Range &r) {
  TV acc = TV::T;
  for (TV v : r) acc = tv_and(acc, v);
  return acc;
}

template <typename Range> TV fold_or(const Range &r) {
  TV acc = TV::F;
  for (TV v : r) acc = tv_or(acc, v);
  return acc;
}

constexpr char to_char(TV a) { return a == TV::T ? 'T' : (a == TV::B ? 'B' : 'F'); }

inline std::string to_string(TV a) { return std::string(1, to_char(a)); }

inline TV tv_from_char(char c) {
  switch (c) {
  case 'T': return TV::T;
  case 'B': return TV::B;
  case 'F': return TV::F;
  default: throw std::invalid_argument("not a truth value: " + std::string(1, c));
  }
}

inline TV tv_from_string(const std::string &s) {
  if (s.size() != 1) throw std::invalid_argument("not a truth value: " + s);
  return tv_from_char(s[0]);
}

inline std::ostream &operator<<(std::ostream &os, TV a) { return os << to_char(a); }

} // namespace semitop
