#pragma once

// First-generation iterated function systems on a line segment.

#include "cantor/dissection.hpp"
#include "cantor/interval.hpp"
#include "cantor/numeric.hpp"
#include "cantor/words.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

namespace cantor {

enum class MapKind { affine, smooth };

/// A contractive map of the line with derivative-bound metadata.
///   sigma <= |psi'| <= delta < 1 on the domain, |psi''| <= curvature.
template <Scalar T>
class MapDescriptor {
 public:
  using Function = std::function<T(const T&)>;

  /// x -> slope*x + offset. sigma = delta = |slope|, curvature 0.
  static MapDescriptor affine(T slope, T offset);

  /// User-described smooth monotone map; value and derivative must agree with the bounds on `domain`.
  static MapDescriptor smooth(Function value, Function derivative, T sigma, T delta, T curvature,
                              Interval<T> domain);

  static MapDescriptor identity() { return affine(T(1), T(0)); }

  MapKind kind() const { return kind_; }
  bool is_affine() const { return kind_ == MapKind::affine; }
  const T& slope() const { return slope_; }
  const T& offset() const { return offset_; }
  const T& sigma() const { return sigma_; }
  const T& delta() const { return delta_; }
  /// Upper bound on |psi''|; absent for composites of smooth maps.
  const std::optional<T>& curvature() const { return curvature_; }
  const std::optional<Interval<T>>& domain() const { return domain_; }

  T operator()(const T& x) const;
  T derivative(const T& x) const;
  /// Image of an interval (every map here is monotone).
  Interval<T> image(const Interval<T>& j) const;
  bool increasing() const;

  /// this o inner.
  MapDescriptor after(const MapDescriptor& inner) const;

 private:
  MapKind kind_ = MapKind::affine;
  T slope_{1};
  T offset_{0};
  Function value_;
  Function derivative_;
  T sigma_{1};
  T delta_{1};
  std::optional<T> curvature_;
  std::optional<Interval<T>> domain_;
  bool increasing_ = true;
};

/// What dense sampling of a smooth map found.
struct SmoothValidation {
  std::size_t samples = 0;
  double min_abs_derivative = 0;
  double max_abs_derivative = 0;
  double max_second_derivative = 0;
  /// The checks are sampled, not proven.
  bool sampled = true;
};

inline constexpr std::size_t kSmoothSamples = 10'000;

/// Checks sigma <= |psi'| <= delta, |psi''| <= B (difference quotients of psi') and psi(I) in I
/// on `samples` evenly spaced points. Throws InputError naming the violated bound.
SmoothValidation validate_smooth(const MapDescriptor<double>& m, std::size_t samples = kSmoothSamples);

template <Scalar T>
class Ifs {
 public:
  /// Validates contraction metadata and requires two distinct fixed points. When `domain` is
  /// absent (affine systems only) the hull of the attractor is used.
  explicit Ifs(std::vector<MapDescriptor<T>> maps, std::optional<Interval<T>> domain = std::nullopt);

  std::size_t size() const { return maps_.size(); }
  const MapDescriptor<T>& operator[](std::size_t i) const { return maps_[i]; }
  const std::vector<MapDescriptor<T>>& maps() const { return maps_; }
  const Interval<T>& domain() const { return domain_; }
  bool all_affine() const;

  /// Sampling reports for smooth maps, in map order (empty for affine systems).
  const std::vector<SmoothValidation>& validations() const { return validations_; }

 private:
  std::vector<MapDescriptor<T>> maps_;
  Interval<T> domain_;
  std::vector<SmoothValidation> validations_;
};

/// psi_{v_1} o ... o psi_{v_n}; the empty word gives the identity.
template <Scalar T>
MapDescriptor<T> compose_map(const Ifs<T>& f, const IfsWord& v);

/// Unique fixed point. Affine maps solve exactly; smooth maps iterate from the domain midpoint.
template <Scalar T>
T fixed_point(const MapDescriptor<T>& m, double tol = kFloatTolerance);

template <Scalar T>
struct AttractorBounds {
  std::vector<T> inner;
  IntervalUnion<T> outer;
};

/// inner = U^n(fixed points), outer = U^n(hull).
template <Scalar T>
AttractorBounds<T> attractor_bounds(const Ifs<T>& f, std::size_t n,
                                    std::size_t budget = kDefaultIntervalBudget);

/// The map pair realizing each hull endpoint.
struct HullWitness {
  std::size_t low_map = 0;
  std::size_t high_map = 0;
  /// 1..4 for the affine case analysis, 0 when found by iteration.
  int which_case = 0;
};

/// Conv(K) for the attractor K.
template <Scalar T>
Interval<T> hull(const Ifs<T>& f, double tol = kFloatTolerance);

template <Scalar T>
HullWitness hull_witness(const Ifs<T>& f, double tol = kFloatTolerance);

/// Two maps of f whose attractor has the same hull, in their original order.
template <Scalar T>
Ifs<T> extreme_submaps(const Ifs<T>& f);

/// c with d(psi_{vi}(J)) >= c d(psi_v(J)). Exactly sigma for affine systems.
template <Scalar T>
T ratio_floor(const Ifs<T>& f);

/// Construction I_w = psi_{prefix} o psi_{g(w)}(hull) of a two-map system, children ordered by position.
template <Scalar T>
ConstructionPtr<T> ifs_construction(const Ifs<T>& f, const IfsWord& prefix = {});

/// The hull itself when the two first-level images overlap or touch, otherwise the construction.
template <Scalar T>
std::variant<Interval<T>, ConstructionPtr<T>> two_map_construction(const Ifs<T>& f);

}  // namespace cantor
