#pragma once

// Second-generation systems phi_beta(x) = alpha x + (1 - alpha) beta, beta in K.
// The attractor is K_Phi = (1 - alpha) sum_j alpha^j K, computed as
// K_Phi = alpha^n K_Phi + J_n with J_n the first n terms of the series.

#include "cantor/dissection.hpp"
#include "cantor/ifs.hpp"
#include "cantor/interval.hpp"
#include "cantor/numeric.hpp"
#include "cantor/words.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace cantor {

/// The first-generation set K, given by a construction or by an IFS.
template <Scalar T>
class FirstGeneration {
 public:
  explicit FirstGeneration(ConstructionPtr<T> c) : source_(std::move(c)) {}
  explicit FirstGeneration(Ifs<T> f) : source_(std::move(f)) {}

  bool is_construction() const { return source_.index() == 0; }
  const ConstructionPtr<T>& construction() const { return std::get<0>(source_); }
  const Ifs<T>& ifs() const { return std::get<1>(source_); }

  Interval<T> hull() const;
  /// Depth-n outer cover: C_n, or U^n(hull).
  IntervalUnion<T> outer(std::size_t depth) const;
  /// Points of K found at depth n: cover endpoints, or U^n(fixed points).
  std::vector<T> inner(std::size_t depth) const;

 private:
  std::variant<ConstructionPtr<T>, Ifs<T>> source_;
};

template <Scalar T>
struct SecondGenSpec {
  FirstGeneration<T> first_gen;
  T alpha;
};

/// phi_{beta_n} o ... o phi_{beta_1}(x) = alpha^n x + alpha^n (1 - alpha) sum_i beta_i / alpha^i.
template <Scalar T>
T compose_phi(const T& alpha, const std::vector<T>& betas, const T& x);

template <Scalar T>
struct CoverSelection {
  std::size_t level = 0;
  std::vector<BinaryWord> words;
  std::vector<IfsWord> ifs_words;
  /// Hulls of the selected pieces, by increasing left endpoint.
  std::vector<Interval<T>> pieces;
  /// Every piece diameter lies in [window_lo, window_hi) (construction route) or
  /// (window_lo, window_hi] (IFS route).
  T window_lo;
  T window_hi;
};

/// Words w with d(I_w) >= A alpha^l and a child below A alpha^l, A = d(I_root).
/// `a` is the ratio bound used for the upper end of the window.
template <Scalar T>
CoverSelection<T> select_cover(const ConstructionPtr<T>& k, const T& alpha, std::size_t l, const T& a);

/// Shortest words v with d(psi_v(hull)) <= A alpha^l, A = d(hull).
template <Scalar T>
CoverSelection<T> select_cover(const Ifs<T>& f, const T& alpha, std::size_t l);

template <Scalar T>
struct PartialSum {
  IntervalUnion<T> outer;
  std::vector<T> inner;
};

/// Merge tolerance for float sums: 4 machine epsilons of the hull width; zero for rationals.
template <Scalar T>
T merge_tolerance(const Interval<T>& hull);

/// Outer = (1-alpha) sum_{j<n} alpha^j C_depth, inner = the same sum over cover endpoints.
template <Scalar T>
PartialSum<T> partial_geometric_sum(const FirstGeneration<T>& k, const T& alpha, std::size_t n, std::size_t depth,
                                    std::size_t budget = kDefaultIntervalBudget, bool with_inner = true);

enum class Mode { empirical, certified };

std::string_view to_string(Mode m);

struct AttractorOptions {
  double tol = 1e-9;
  Mode mode = Mode::empirical;
  /// Use exactly this many series terms instead of searching for the stabilization point.
  std::optional<std::size_t> n_override;
  /// Terms added after the stabilization point.
  std::size_t extra_terms = 0;
  std::size_t n_max = 64;
  std::size_t depth_max = 12;
  std::size_t budget = kDefaultIntervalBudget;
  std::size_t iter_max = 200;
};

template <Scalar T>
struct CertifiedDetail {
  T a;
  T amplitude;
  std::size_t cabrelli_terms = 0;
  T min_piece_diameter;
  T max_piece_gap;
  std::size_t pieces = 0;
  std::optional<BigInt> count_bound;
  std::string route;
};

template <Scalar T>
struct AttractorResult {
  IntervalUnion<T> set;
  IntervalUnion<T> partial_sum;
  std::size_t n = 0;
  std::size_t stabilization_n = 0;
  std::size_t depth = 0;
  bool depth_converged = false;
  std::size_t iterations = 0;
  std::vector<double> displacements;
  /// "empirical", "piecewise-cabrelli", "count" or "interval".
  std::string guarantee;
  std::size_t merged_gaps = 0;
  std::optional<CertifiedDetail<T>> certificate;
};

/// Throws BudgetError, NonConvergence, or CertificateError when certified mode cannot certify.
template <Scalar T>
AttractorResult<T> second_gen_attractor(const SecondGenSpec<T>& spec, const AttractorOptions& opts = {});

/// Points whose window [x - alpha M - eps, x - alpha m + eps] misses (1-alpha) K, [m, M] = hull(K).
/// Only bounded gaps of the depth cover are scanned.
template <Scalar T>
std::vector<OpenInterval<T>> n_epsilon(const FirstGeneration<T>& k, const T& alpha, const T& eps,
                                       std::size_t depth);

/// inner(K) in attractor, and attractor within alpha d(hull) of outer(K).
template <Scalar T>
bool sandwich_check(const SecondGenSpec<T>& spec, const IntervalUnion<T>& attractor, std::size_t depth);

}  // namespace cantor
