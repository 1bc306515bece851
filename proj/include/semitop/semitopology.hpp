#pragma once

#include "semitop/three.hpp"

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace semitop {

/// A finite semitopology: a nonempty point set (indices 0..n-1) together
/// with a basis of open sets. Arbitrary unions of basis sets are open; the
/// spatial modalities and the n-twined check only ever need the basis, which
/// keeps evaluation polynomial while staying exact over the union-closure.
class Semitopology {
public:
  using PointSet = std::vector<std::size_t>;

  Semitopology(std::size_t n_points, std::vector<PointSet> basis)
      : n_points_(n_points) {
    if (n_points == 0) throw std::invalid_argument("semitopology needs at least one point");
    for (auto &s : basis) {
      for (std::size_t p : s)
        if (p >= n_points) throw std::invalid_argument("basis point out of range");
      std::sort(s.begin(), s.end());
      s.erase(std::unique(s.begin(), s.end()), s.end());
    }
    std::sort(basis.begin(), basis.end());
    basis.erase(std::unique(basis.begin(), basis.end()), basis.end());
    basis_ = std::move(basis);

    // The whole point set is open by definition; make that effective if the
    // given basis does not already cover it.
    std::vector<bool> covered(n_points_, false);
    for (const auto &s : basis_)
      for (std::size_t p : s) covered[p] = true;
    if (std::find(covered.begin(), covered.end(), false) != covered.end()) {
      PointSet all(n_points_);
      for (std::size_t p = 0; p < n_points_; ++p) all[p] = p;
      basis_.push_back(std::move(all));
      std::sort(basis_.begin(), basis_.end());
    }
  }

  /// Points p0..p(n-1) with all size-q subsets as the basis: the classic
  /// "any q participants form a quorum" system.
  static Semitopology from_threshold(std::size_t n, std::size_t q) {
    if (q == 0 || q > n) throw std::invalid_argument("from_threshold needs 1 <= q <= n");
    std::vector<PointSet> basis;
    PointSet cur;
    subsets_of_size(n, q, 0, cur, basis);
    return Semitopology(n, std::move(basis));
  }

  std::size_t point_count() const { return n_points_; }

  const std::vector<PointSet> &basis() const { return basis_; }

  std::vector<PointSet> nonempty_basis_opens() const {
    std::vector<PointSet> out;
    for (const auto &s : basis_)
      if (!s.empty()) out.push_back(s);
    return out;
  }

  /// S is open iff it equals the union of the basis sets it contains.
  bool is_open(PointSet s) const {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    for (std::size_t p : s)
      if (p >= n_points_) throw std::invalid_argument("point out of range");
    std::vector<bool> in_s(n_points_, false), covered(n_points_, false);
    for (std::size_t p : s) in_s[p] = true;
    for (const auto &b : basis_) {
      bool inside = std::all_of(b.begin(), b.end(), [&](std::size_t p) { return in_s[p]; });
      if (inside)
        for (std::size_t p : b) covered[p] = true;
    }
    for (std::size_t p : s)
      if (!covered[p]) return false;
    return true;
  }

  /// Every multiset of n nonempty opens shares a point. Checking subsets of
  /// the basis of size up to n is exact: any nonempty open contains a
  /// nonempty basis generator, and dropping duplicates only grows the
  /// intersection.
  bool is_n_twined(std::size_t n) const {
    if (n == 0) return true; // empty intersection convention: the whole space
    auto opens = nonempty_basis_opens();
    std::size_t k = std::min(n, opens.size());
    if (k == 0) return true;
    std::vector<std::size_t> pick(k);
    return twined_rec(opens, pick, 0, 0, k);
  }

  template <typename Fn> TV everywhere(Fn f) const {
    TV acc = TV::T;
    for (std::size_t p = 0; p < n_points_; ++p) acc = tv_and(acc, f(p));
    return acc;
  }

  template <typename Fn> TV somewhere(Fn f) const {
    TV acc = TV::F;
    for (std::size_t p = 0; p < n_points_; ++p) acc = tv_or(acc, f(p));
    return acc;
  }

  /// Join over nonempty opens of the meet over their members.
  template <typename Fn> TV quorum(Fn f) const {
    TV acc = TV::F;
    for (const auto &open : basis_) {
      if (open.empty()) continue;
      TV m = TV::T;
      for (std::size_t p : open) m = tv_and(m, f(p));
      acc = tv_or(acc, m);
    }
    return acc;
  }

  /// Meet over nonempty opens of the join over their members; the de Morgan
  /// dual of quorum.
  template <typename Fn> TV contraquorum(Fn f) const {
    TV acc = TV::T;
    for (const auto &open : basis_) {
      if (open.empty()) continue;
      TV j = TV::F;
      for (std::size_t p : open) j = tv_or(j, f(p));
      acc = tv_and(acc, j);
    }
    return acc;
  }

private:
  static void subsets_of_size(std::size_t n, std::size_t q, std::size_t start,
                              PointSet &cur, std::vector<PointSet> &out) {
    if (cur.size() == q) {
      out.push_back(cur);
      return;
    }
    for (std::size_t p = start; p + (q - cur.size()) <= n; ++p) {
      cur.push_back(p);
      subsets_of_size(n, q, p + 1, cur, out);
      cur.pop_back();
    }
  }

  bool twined_rec(const std::vector<PointSet> &opens, std::vector<std::size_t> &pick,
                  std::size_t depth, std::size_t start, std::size_t k) const {
    if (depth == k) {
      std::vector<bool> common(n_points_, true);
      for (std::size_t i = 0; i < k; ++i) {
        std::vector<bool> mem(n_points_, false);
        for (std::size_t p : opens[pick[i]]) mem[p] = true;
        for (std::size_t p = 0; p < n_points_; ++p) common[p] = common[p] && mem[p];
      }
      return std::find(common.begin(), common.end(), true) != common.end();
    }
    for (std::size_t i = start; i < opens.size(); ++i) {
      pick[depth] = i;
      if (!twined_rec(opens, pick, depth + 1, i + 1, k)) return false;
    }
    return true;
  }

  std::size_t n_points_;
  std::vector<PointSet> basis_;
};

} // namespace semitop
