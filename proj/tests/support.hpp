#pragma once

#include "cantor/attractor.hpp"
#include "cantor/dissection.hpp"
#include "cantor/errors.hpp"
#include "cantor/ifs.hpp"
#include "cantor/interval.hpp"
#include "cantor/numeric.hpp"
#include "cantor/oracle.hpp"
#include "cantor/setops.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace testing {

using cantor::Rational;

inline Rational Q(long long p, long long q = 1) { return cantor::make_rational(p, q); }

template <class T>
cantor::Ifs<T> ifs_of(std::vector<std::pair<T, T>> maps) {
  std::vector<cantor::MapDescriptor<T>> ds;
  for (auto& [s, o] : maps) ds.push_back(cantor::MapDescriptor<T>::affine(s, o));
  return cantor::Ifs<T>(std::move(ds));
}

/// x/3, x/3 + 2/3.
inline cantor::Ifs<Rational> middle_third_ifs() { return ifs_of<Rational>({{Q(1, 3), Q(0)}, {Q(1, 3), Q(2, 3)}}); }

/// x/3 - 2/3, x/3 + 2/3: middle-third on [-1, 1].
inline cantor::Ifs<Rational> symmetric_ifs() { return ifs_of<Rational>({{Q(1, 3), Q(-2, 3)}, {Q(1, 3), Q(2, 3)}}); }

inline cantor::Ifs<double> symmetric_ifs_double() {
  return ifs_of<double>({{1.0 / 3, -2.0 / 3}, {1.0 / 3, 2.0 / 3}});
}

template <class T>
cantor::IntervalUnion<T> union_of(std::vector<std::pair<T, T>> ivs) {
  std::vector<cantor::Interval<T>> v;
  for (auto& [a, b] : ivs) v.emplace_back(a, b);
  return cantor::IntervalUnion<T>::from_pieces(std::move(v));
}

inline cantor::IntervalUnion<double> to_double_union(const cantor::IntervalUnion<Rational>& u) {
  std::vector<cantor::Interval<double>> v;
  for (const auto& iv : u) v.emplace_back(cantor::to_double(iv.lo), cantor::to_double(iv.hi));
  return cantor::IntervalUnion<double>::from_sorted(std::move(v));
}

/// Small hand-rolled generators over a fixed-seed engine.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  long long integer(long long lo, long long hi) { return std::uniform_int_distribution<long long>(lo, hi)(rng_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }
  /// p/q with q in [1, max_den], value in [lo, hi).
  Rational rational(const Rational& lo, const Rational& hi, long long max_den = 60) {
    long long q = integer(1, max_den);
    Rational span = hi - lo;
    Rational r = lo + span * Q(integer(0, q - 1), q);
    return r;
  }
  cantor::BinaryWord word(std::size_t len) {
    cantor::BinaryWord w;
    for (std::size_t i = 0; i < len; ++i) w = w.child(static_cast<int>(integer(0, 1)));
    return w;
  }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace testing
