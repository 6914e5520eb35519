#pragma once

#include "cantor/errors.hpp"
#include "cantor/numeric.hpp"

#include <algorithm>
#include <compare>
#include <cstddef>
#include <iterator>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cantor {

/// Closed interval [lo, hi] with lo <= hi.
template <Scalar T>
struct Interval {
  T lo;
  T hi;

  Interval() : lo(0), hi(0) {}
  Interval(T lo_, T hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
    if (hi < lo) throw InvariantViolation("interval with hi < lo");
  }
  static Interval point(const T& x) { return Interval(x, x); }

  T diameter() const { return hi - lo; }
  T midpoint() const { return (lo + hi) / 2; }
  bool contains(const T& x) const { return lo <= x && x <= hi; }
  bool contains(const Interval& other) const { return lo <= other.lo && other.hi <= hi; }

  /// Image under x -> scale*x + shift; orientation-reversing scales swap endpoints.
  Interval affine_image(const T& scale, const T& shift) const {
    T a = scale * lo + shift;
    T b = scale * hi + shift;
    return b < a ? Interval(std::move(b), std::move(a)) : Interval(std::move(a), std::move(b));
  }

  friend Interval operator+(const Interval& x, const Interval& y) { return Interval(x.lo + y.lo, x.hi + y.hi); }
  friend bool operator==(const Interval& x, const Interval& y) { return x.lo == y.lo && x.hi == y.hi; }
};

/// Open interval ]lo, hi[; a gap of a compact set.
template <Scalar T>
struct OpenInterval {
  T lo;
  T hi;

  T width() const { return hi - lo; }
  bool contains(const T& x) const { return lo < x && x < hi; }
  friend bool operator==(const OpenInterval& x, const OpenInterval& y) { return x.lo == y.lo && x.hi == y.hi; }
};

/// Sorted list of disjoint closed intervals separated by more than the merge tolerance.
template <Scalar T>
class IntervalUnion {
 public:
  IntervalUnion() = default;

  /// Sorts and coalesces pieces whose separation is <= merge_tol.
  static IntervalUnion from_pieces(std::vector<Interval<T>> pieces, const T& merge_tol = T(0)) {
    std::sort(pieces.begin(), pieces.end(), [](const Interval<T>& x, const Interval<T>& y) {
      return x.lo < y.lo || (x.lo == y.lo && x.hi < y.hi);
    });
    IntervalUnion out;
    out.intervals_.reserve(pieces.size());
    for (auto& p : pieces) {
      if (!out.intervals_.empty()) {
        Interval<T>& last = out.intervals_.back();
        T limit = last.hi + merge_tol;
        if (p.lo <= limit) {
          if (last.hi < p.lo) ++out.merged_gaps_;
          if (last.hi < p.hi) last.hi = std::move(p.hi);
          continue;
        }
      }
      out.intervals_.push_back(std::move(p));
    }
    return out;
  }

  /// Adopts an already sorted list; each interval must lie strictly left of the next.
  static IntervalUnion from_sorted(std::vector<Interval<T>> sorted) {
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      if (!(sorted[i - 1].hi < sorted[i].lo)) {
        throw InvariantViolation("interval list is not strictly increasing");
      }
    }
    IntervalUnion out;
    out.intervals_ = std::move(sorted);
    return out;
  }

  static IntervalUnion single(Interval<T> iv) { return from_sorted({std::move(iv)}); }

  const std::vector<Interval<T>>& intervals() const { return intervals_; }
  std::size_t size() const { return intervals_.size(); }
  bool empty() const { return intervals_.empty(); }
  const Interval<T>& operator[](std::size_t i) const { return intervals_[i]; }
  auto begin() const { return intervals_.begin(); }
  auto end() const { return intervals_.end(); }

  /// Number of gaps closed because they were narrower than the merge tolerance.
  std::size_t merged_gaps() const { return merged_gaps_; }

  Interval<T> hull() const {
    if (empty()) throw InvariantViolation("hull of an empty interval union");
    return Interval<T>(intervals_.front().lo, intervals_.back().hi);
  }

  /// Index of the interval containing x, if any.
  std::optional<std::size_t> locate(const T& x) const {
    auto it = std::upper_bound(intervals_.begin(), intervals_.end(), x,
                               [](const T& v, const Interval<T>& iv) { return v < iv.lo; });
    if (it == intervals_.begin()) return std::nullopt;
    --it;
    if (it->contains(x)) return static_cast<std::size_t>(it - intervals_.begin());
    return std::nullopt;
  }

  bool contains(const T& x) const { return locate(x).has_value(); }

  bool contains(const Interval<T>& iv) const {
    auto idx = locate(iv.lo);
    return idx && intervals_[*idx].contains(iv);
  }

  /// True iff every interval of this union lies inside `other`.
  bool subset_of(const IntervalUnion& other) const {
    return std::all_of(intervals_.begin(), intervals_.end(),
                       [&](const Interval<T>& iv) { return other.contains(iv); });
  }

  /// True iff some point of the union lies in the open interval.
  bool intersects(const OpenInterval<T>& g) const {
    return std::any_of(intervals_.begin(), intervals_.end(),
                       [&](const Interval<T>& iv) { return iv.lo < g.hi && g.lo < iv.hi; });
  }

  std::vector<OpenInterval<T>> gaps() const {
    std::vector<OpenInterval<T>> out;
    for (std::size_t i = 1; i < intervals_.size(); ++i) {
      out.push_back(OpenInterval<T>{intervals_[i - 1].hi, intervals_[i].lo});
    }
    return out;
  }

  std::optional<T> min_gap() const {
    std::optional<T> best;
    for (std::size_t i = 1; i < intervals_.size(); ++i) {
      T g = intervals_[i].lo - intervals_[i - 1].hi;
      if (!best || g < *best) best = g;
    }
    return best;
  }

  T total_length() const {
    T sum(0);
    for (const auto& iv : intervals_) sum += iv.diameter();
    return sum;
  }

  T total_gap_length() const { return hull().diameter() - total_length(); }

  /// Image under x -> scale*x + shift (scale != 0).
  IntervalUnion affine_image(const T& scale, const T& shift) const {
    std::vector<Interval<T>> out;
    out.reserve(intervals_.size());
    for (const auto& iv : intervals_) out.push_back(iv.affine_image(scale, shift));
    if (scale < 0) std::reverse(out.begin(), out.end());
    IntervalUnion r;
    r.intervals_ = std::move(out);
    return r;
  }

  /// Endpoints of every interval, ascending (a point set inside the union).
  std::vector<T> endpoints() const {
    std::vector<T> pts;
    pts.reserve(2 * intervals_.size());
    for (const auto& iv : intervals_) {
      pts.push_back(iv.lo);
      if (iv.hi != iv.lo) pts.push_back(iv.hi);
    }
    return pts;
  }

  friend bool operator==(const IntervalUnion& x, const IntervalUnion& y) { return x.intervals_ == y.intervals_; }

 private:
  std::vector<Interval<T>> intervals_;
  std::size_t merged_gaps_ = 0;
};

/// Default cap on the number of candidate pieces formed by one Minkowski sum.
inline constexpr std::size_t kDefaultIntervalBudget = 2'000'000;

/// A + B, merged with `merge_tol`. Throws BudgetError when |A|*|B| exceeds `budget`.
template <Scalar T>
IntervalUnion<T> minkowski_sum(const IntervalUnion<T>& a, const IntervalUnion<T>& b, const T& merge_tol = T(0),
                               std::size_t budget = kDefaultIntervalBudget) {
  if (a.empty() || b.empty()) return {};
  if (a.size() > budget / b.size()) {
    throw BudgetError("Minkowski sum would form " + std::to_string(a.size()) + " x " + std::to_string(b.size()) +
                          " pieces",
                      a.size());
  }
  std::vector<Interval<T>> pieces;
  pieces.reserve(a.size() * b.size());
  for (const auto& x : a) {
    for (const auto& y : b) pieces.push_back(x + y);
  }
  return IntervalUnion<T>::from_pieces(std::move(pieces), merge_tol);
}

/// Distance from x to the nearest point of a non-empty union.
template <Scalar T>
T distance_to(const T& x, const IntervalUnion<T>& u) {
  const auto& ivs = u.intervals();
  auto it = std::upper_bound(ivs.begin(), ivs.end(), x, [](const T& v, const Interval<T>& iv) { return v < iv.lo; });
  std::optional<T> best;
  if (it != ivs.end()) best = it->lo - x;
  if (it != ivs.begin()) {
    const auto& left = *std::prev(it);
    T d = left.hi < x ? T(x - left.hi) : T(0);
    if (!best || d < *best) best = d;
  }
  return *best;
}

/// sup over x in a of the distance from x to b.
template <Scalar T>
T directed_hausdorff(const IntervalUnion<T>& a, const IntervalUnion<T>& b) {
  if (a.empty() || b.empty()) throw UndefinedDistance("Hausdorff distance of an empty set");
  T worst(0);
  const auto& bs = b.intervals();
  auto consider = [&](const T& x) {
    T d = distance_to(x, b);
    if (worst < d) worst = d;
  };
  for (const auto& iv : a) {
    consider(iv.lo);
    consider(iv.hi);
    // Inside a gap of b the distance peaks at the gap midpoint; clip it into iv.
    auto first = std::upper_bound(bs.begin(), bs.end(), iv.lo,
                                  [](const T& v, const Interval<T>& x) { return v < x.lo; });
    if (first != bs.begin()) --first;
    for (auto it = first; it != bs.end() && std::next(it) != bs.end(); ++it) {
      const T& g0 = it->hi;
      const T& g1 = std::next(it)->lo;
      if (iv.hi < g0) break;
      if (g1 < iv.lo) continue;
      T mid = (g0 + g1) / 2;
      if (mid < iv.lo) mid = iv.lo;
      if (iv.hi < mid) mid = iv.hi;
      consider(mid);
    }
  }
  return worst;
}

/// Symmetric Hausdorff distance, exact on endpoints.
template <Scalar T>
T hausdorff_distance(const IntervalUnion<T>& a, const IntervalUnion<T>& b) {
  T ab = directed_hausdorff(a, b);
  T ba = directed_hausdorff(b, a);
  return ab < ba ? ba : ab;
}

/// Points as degenerate intervals (duplicates removed).
template <Scalar T>
IntervalUnion<T> point_set(std::vector<T> points) {
  std::vector<Interval<T>> pieces;
  pieces.reserve(points.size());
  for (auto& p : points) pieces.push_back(Interval<T>::point(p));
  return IntervalUnion<T>::from_pieces(std::move(pieces));
}

/// Closed r-neighbourhood of a union.
template <Scalar T>
IntervalUnion<T> neighbourhood(const IntervalUnion<T>& u, const T& r) {
  std::vector<Interval<T>> pieces;
  pieces.reserve(u.size());
  for (const auto& iv : u) pieces.emplace_back(iv.lo - r, iv.hi + r);
  return IntervalUnion<T>::from_pieces(std::move(pieces));
}

}  // namespace cantor
