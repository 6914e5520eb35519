#pragma once

// Calculus on ulbd Cantor sets: separated unions, sum-subset constructions,
// the Cabrelli interval test and the geometric-count bound.

#include "cantor/dissection.hpp"
#include "cantor/interval.hpp"
#include "cantor/numeric.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace cantor {

/// min{a/2, a^2/(a+1)}.
template <Scalar T>
T aprime(const T& a);

/// a_1 = a, a_{m+1} = aprime(min{a, a_m}).
template <Scalar T>
T a_m(const T& a, std::size_t m);

/// Common ratio bound of the union of two separated sets with bounds a1, a2.
/// Throws OverlapError unless max c1 < min c2.
template <Scalar T>
T lemma7_a(const ConstructionPtr<T>& c1, const ConstructionPtr<T>& c2, const T& a1, const T& a2);

enum class UnionCase { first, second, third, fourth };

std::string_view to_string(UnionCase c);

template <Scalar T>
struct UnionPlan {
  /// Last spine depth whose interval is still at least as wide as the other root.
  std::size_t n_bar = 0;
  /// True when the second root is the wider one; the spine then runs along 0^n of c2.
  bool mirrored = false;
  /// aprime of the combined bound.
  T bound;
  T a;

  /// Which branch of the construction produces I_w.
  UnionCase classify(const BinaryWord& w) const;
};

template <Scalar T>
UnionPlan<T> union_plan(const ConstructionPtr<T>& c1, const ConstructionPtr<T>& c2);

/// Construction of c1 U c2 for max c1 < min c2. Both inputs need a usable ratio bound
/// (CertificateError otherwise).
template <Scalar T>
ConstructionPtr<T> union_construct(const ConstructionPtr<T>& c1, const ConstructionPtr<T>& c2);

/// A subset of c_1 + ... + c_m with the same extreme points, built by folding pairwise sums.
/// Each input must carry a ratio bound >= a.
template <Scalar T>
ConstructionPtr<T> sum_subset_construct(const std::vector<ConstructionPtr<T>>& cs, const T& a);

/// (m-1) a^2/(1-a)^3 + a/(1-a) with a clamped to 1/3.
template <Scalar T>
T cabrelli_value(const T& a, std::size_t m);

template <Scalar T>
bool cabrelli_check(const T& a, std::size_t m);

template <Scalar T>
struct IntervalCertificate {
  bool certified = false;
  T a_used;
  std::size_t m = 0;
  T condition_value;
  T min_diameter;
  T max_gap;
  bool gaps_exhaustive = false;
  std::optional<Interval<T>> interval;
  std::string reason;
};

/// Certifies c_1 + ... + c_m = [sum min, sum max] when the Cabrelli inequality holds and
/// every diameter exceeds every gap. Gaps are scanned to `depth`.
template <Scalar T>
IntervalCertificate<T> sum_is_interval(const std::vector<ConstructionPtr<T>>& cs, const T& a,
                                       std::size_t depth = 12);

/// Transfers a certificate to sets D_i with C_i in D_i in I_i and matching extremes: the sum of
/// the D_i is the same interval. `enclosures[i]` is the hull of D_i. Throws InputError on mismatch.
template <Scalar T>
Interval<T> extend_certificate(const IntervalCertificate<T>& cert, const std::vector<ConstructionPtr<T>>& cs,
                               const std::vector<Interval<T>>& enclosures);

template <Scalar T>
struct GeometricCount {
  std::size_t m = 0;
  T a_m;
  T b;
  BigInt h;
  BigInt n;
};

/// m = least with m A1 > A2, b = min(a_m(a, m), 1/3), H = least with H b^2/(1-b)^3 + b/(1-b) >= 1,
/// n = H m + m.
template <Scalar T>
GeometricCount<T> geometric_count_detail(const T& a1, const T& a2, const T& a);

template <Scalar T>
BigInt geometric_count(const T& a1, const T& a2, const T& a) {
  return geometric_count_detail(a1, a2, a).n;
}

}  // namespace cantor
