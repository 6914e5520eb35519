#pragma once

// Word-indexed constructions of (quasi-)Cantor sets. A construction assigns a
// closed interval I_w to each binary word w, with
//   a_w = a_{w0} < b_{w0} < a_{w1} < b_{w1} = b_w,
// and the set it builds is the intersection of its depth-n covers.
//
// Every node of a construction is itself a construction (the subtree rooted at
// that node), so a word is resolved by walking child() from the root.

#include "cantor/interval.hpp"
#include "cantor/numeric.hpp"
#include "cantor/words.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

namespace cantor {

enum class Backing { explicit_tree, rule, ifs, union_of_two, sum, affine_image };

std::string_view to_string(Backing b);

template <Scalar T>
class Construction;

template <Scalar T>
using ConstructionPtr = std::shared_ptr<const Construction<T>>;

template <Scalar T>
class Construction {
 public:
  virtual ~Construction() = default;

  virtual Interval<T> root() const = 0;
  /// Subtree rooted at I_j. Throws DepthUnavailable past the last realizable level.
  virtual ConstructionPtr<T> child(int j) const = 0;
  virtual Backing backing() const = 0;

  /// The complete, depth-independent set of dissection ratios of a self-similar rule.
  virtual std::optional<std::vector<T>> ratio_set() const { return std::nullopt; }
  /// A lower bound on every dissection ratio that holds by construction (not by sampling).
  virtual std::optional<T> proven_ratio_bound() const { return std::nullopt; }
  /// Levels still realizable below this node; nullopt when unbounded.
  virtual std::optional<std::size_t> remaining_depth() const { return std::nullopt; }
};

/// Hard limit on the number of levels an explicit tree may carry.
inline constexpr std::size_t kExplicitDepthLimit = 24;

/// Self-similar rule: the left child keeps the fraction `left` of I_w, the right child the fraction `right`.
template <Scalar T>
ConstructionPtr<T> make_rule(Interval<T> root, T left, T right);

/// Middle-third rule on [lo, hi].
template <Scalar T>
ConstructionPtr<T> middle_third(T lo, T hi);

/// Explicit finite tree. levels[k] holds the 2^k intervals of depth k in left-to-right order.
template <Scalar T>
ConstructionPtr<T> make_explicit(std::vector<std::vector<Interval<T>>> levels,
                                 std::size_t depth_limit = kExplicitDepthLimit);

/// Snapshot of the first `depth` levels of any construction as an explicit tree.
template <Scalar T>
ConstructionPtr<T> materialize(const ConstructionPtr<T>& c, std::size_t depth);

/// Image of a construction under x -> scale*x + shift. Negative scales mirror the word order.
template <Scalar T>
ConstructionPtr<T> affine_image(const ConstructionPtr<T>& c, const T& scale, const T& shift);

template <Scalar T>
ConstructionPtr<T> translate(const ConstructionPtr<T>& c, const T& shift) {
  return affine_image(c, T(1), shift);
}

/// The induced construction on I_w: w' -> I_{ww'}.
template <Scalar T>
ConstructionPtr<T> subtree(const ConstructionPtr<T>& c, const BinaryWord& w);

template <Scalar T>
Interval<T> interval_at(const ConstructionPtr<T>& c, const BinaryWord& w) {
  return subtree(c, w)->root();
}

/// Subtrees of all 2^n words of length n, in left-to-right order.
template <Scalar T>
std::vector<ConstructionPtr<T>> level_nodes(const ConstructionPtr<T>& c, std::size_t n);

/// C_n: the 2^n intervals I_w with |w| = n, increasing.
template <Scalar T>
IntervalUnion<T> cover(const ConstructionPtr<T>& c, std::size_t n);

/// d(I_w) / d(I_{w'}) where w' drops the last letter of w.
template <Scalar T>
T dissection_ratio(const ConstructionPtr<T>& c, const BinaryWord& w);

/// ]c_w, d_w[ = ]max I_{w0}, min I_{w1}[.
template <Scalar T>
OpenInterval<T> gap(const ConstructionPtr<T>& c, const BinaryWord& w);

template <Scalar T>
struct GapSummary {
  T width;
  BinaryWord word;
  std::size_t depth_checked = 0;
  /// True when no deeper gap can be wider: every depth-`depth_checked` interval is no wider than `width`.
  bool exhaustive = false;
};

/// Widest gap among words of length < depth (depth >= 1).
template <Scalar T>
GapSummary<T> max_gap(const ConstructionPtr<T>& c, std::size_t depth);

template <Scalar T>
struct UlbdCertificate {
  T bound;
  std::size_t depth_checked = 0;
  /// True for self-similar rules, whose ratio set does not depend on depth.
  bool exhaustive = false;
};

/// Minimum realized dissection ratio over all words of length 1..depth.
template <Scalar T>
UlbdCertificate<T> ulbd_bound(const ConstructionPtr<T>& c, std::size_t depth);

/// A ratio bound usable in proofs: the self-similar ratio set, then the construction's own
/// proven bound, then (when `allow_sampled`) the sampled bound to `probe_depth`.
template <Scalar T>
std::optional<T> usable_ratio_bound(const ConstructionPtr<T>& c, std::size_t probe_depth, bool allow_sampled);

/// Checks the nesting and ratio-sum invariants on every word of length < depth.
/// Throws InvariantViolation naming the first offending word.
template <Scalar T>
void verify_construction(const ConstructionPtr<T>& c, std::size_t depth);

}  // namespace cantor
