#pragma once

// Brute-force ground truth on a uniform grid. Every operation rounds outward,
// so a GridSet always contains the set it approximates.

#include "cantor/ifs.hpp"
#include "cantor/interval.hpp"
#include "cantor/numeric.hpp"

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace cantor {

/// Union of closed cells [origin + k h, origin + (k+1) h] over the occupied indices k.
template <Scalar T>
class GridSet {
 public:
  using Run = std::pair<std::int64_t, std::int64_t>;  // inclusive cell range

  GridSet(T origin, T h);
  /// Runs may arrive unsorted and overlapping; they are normalized.
  GridSet(T origin, T h, std::vector<Run> runs);

  /// Cells meeting any interval of the union.
  static GridSet rasterize(const IntervalUnion<T>& u, const T& origin, const T& h);
  static GridSet from_cells(const T& origin, const T& h, std::vector<std::int64_t> cells);

  const T& origin() const { return origin_; }
  const T& step() const { return h_; }
  const std::vector<Run>& runs() const { return runs_; }
  std::vector<std::int64_t> cells() const;
  std::size_t count() const;
  bool empty() const { return runs_.empty(); }
  bool occupied(std::int64_t k) const;

  /// Maximal runs as closed intervals.
  IntervalUnion<T> to_union() const;

  /// Cell index containing x (the left one at a cell boundary).
  std::int64_t cell_of(const T& x) const;
  /// Inclusive cell range meeting [lo, hi].
  Run cell_range(const T& lo, const T& hi) const;

  friend bool operator==(const GridSet& x, const GridSet& y) {
    return x.origin_ == y.origin_ && x.h_ == y.h_ && x.runs_ == y.runs_;
  }

 private:
  void normalize();

  T origin_;
  T h_;
  std::vector<Run> runs_;
};

/// Iterates A <- raster(U A) from the hull until the occupancy is fixed.
template <Scalar T>
GridSet<T> grid_attractor(const Ifs<T>& f, const T& h, std::size_t max_iter = 10'000);

/// Cell sumset with one extra cell of outward rounding; origins add.
template <Scalar T>
GridSet<T> grid_minkowski(const GridSet<T>& a, const GridSet<T>& b);

/// Iterates A <- U_beta raster(alpha A + (1 - alpha) beta) from the hull until the occupancy is fixed.
template <Scalar T>
GridSet<T> grid_second_gen(const std::vector<T>& betas, const Interval<T>& hull, const T& alpha, const T& h,
                           std::size_t max_iter = 10'000);

/// betas are U^beta_depth(fixed points) together with the endpoints of U^beta_depth(hull).
template <Scalar T>
GridSet<T> grid_second_gen(const Ifs<T>& f, const T& alpha, const T& h, std::size_t beta_depth,
                           std::size_t max_iter = 10'000);

template <Scalar T>
T hausdorff(const GridSet<T>& a, const GridSet<T>& b);
template <Scalar T>
T hausdorff(const GridSet<T>& a, const IntervalUnion<T>& b);
template <Scalar T>
T hausdorff(const IntervalUnion<T>& a, const GridSet<T>& b);
template <Scalar T>
T hausdorff(const IntervalUnion<T>& a, const IntervalUnion<T>& b);

}  // namespace cantor
