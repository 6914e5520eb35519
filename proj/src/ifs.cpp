#include "cantor/ifs.hpp"

#include "cantor/errors.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <utility>

namespace cantor {

template <Scalar T>
MapDescriptor<T> MapDescriptor<T>::affine(T slope, T offset) {
  MapDescriptor m;
  m.kind_ = MapKind::affine;
  m.sigma_ = abs_value(slope);
  m.delta_ = m.sigma_;
  m.curvature_ = T(0);
  m.increasing_ = T(0) < slope;
  m.slope_ = std::move(slope);
  m.offset_ = std::move(offset);
  return m;
}

template <Scalar T>
MapDescriptor<T> MapDescriptor<T>::smooth(Function value, Function derivative, T sigma, T delta, T curvature,
                                          Interval<T> domain) {
  if constexpr (is_exact_v<T>) {
    throw InputError("smooth maps are only supported with floating-point data");
  } else {
    if (!value || !derivative) throw InputError("smooth map needs a value and a derivative");
    MapDescriptor m;
    m.kind_ = MapKind::smooth;
    m.increasing_ = derivative(domain.lo) > 0;
    m.value_ = std::move(value);
    m.derivative_ = std::move(derivative);
    m.sigma_ = sigma;
    m.delta_ = delta;
    m.curvature_ = curvature;
    m.domain_ = domain;
    return m;
  }
}

template <Scalar T>
T MapDescriptor<T>::operator()(const T& x) const {
  if (kind_ == MapKind::affine) return slope_ * x + offset_;
  return value_(x);
}

template <Scalar T>
T MapDescriptor<T>::derivative(const T& x) const {
  if (kind_ == MapKind::affine) return slope_;
  return derivative_(x);
}

template <Scalar T>
Interval<T> MapDescriptor<T>::image(const Interval<T>& j) const {
  T a = (*this)(j.lo);
  T b = (*this)(j.hi);
  if (b < a) std::swap(a, b);
  return Interval<T>(std::move(a), std::move(b));
}

template <Scalar T>
bool MapDescriptor<T>::increasing() const {
  return increasing_;
}

template <Scalar T>
MapDescriptor<T> MapDescriptor<T>::after(const MapDescriptor& inner) const {
  if (kind_ == MapKind::affine && inner.kind_ == MapKind::affine) {
    return affine(slope_ * inner.slope_, slope_ * inner.offset_ + offset_);
  }
  MapDescriptor m;
  m.kind_ = MapKind::smooth;
  MapDescriptor outer = *this;
  MapDescriptor in = inner;
  m.value_ = [outer, in](const T& x) { return outer(in(x)); };
  m.derivative_ = [outer, in](const T& x) { return outer.derivative(in(x)) * in.derivative(x); };
  m.sigma_ = sigma_ * inner.sigma_;
  m.delta_ = delta_ * inner.delta_;
  m.domain_ = inner.domain_ ? inner.domain_ : domain_;
  m.increasing_ = increasing_ == inner.increasing_;
  return m;
}

SmoothValidation validate_smooth(const MapDescriptor<double>& m, std::size_t samples) {
  if (!m.domain()) throw InputError("smooth map has no domain");
  if (samples < 2) samples = 2;
  const Interval<double>& dom = *m.domain();
  const double width = dom.diameter();
  const double slack = 1e-9;
  SmoothValidation v;
  v.samples = samples;
  v.min_abs_derivative = INFINITY;
  double prev_x = 0;
  double prev_d = 0;
  for (std::size_t k = 0; k < samples; ++k) {
    double x = dom.lo + width * static_cast<double>(k) / static_cast<double>(samples - 1);
    double d = m.derivative(x);
    double ad = std::fabs(d);
    v.min_abs_derivative = std::min(v.min_abs_derivative, ad);
    v.max_abs_derivative = std::max(v.max_abs_derivative, ad);
    if (k > 0) {
      if ((d > 0) != (prev_d > 0)) throw InputError("smooth map is not monotone on its domain");
      v.max_second_derivative = std::max(v.max_second_derivative, std::fabs(d - prev_d) / (x - prev_x));
    }
    double y = m(x);
    if (y < dom.lo - slack * (1 + width) || y > dom.hi + slack * (1 + width)) {
      throw InputError("smooth map sends " + format_number(x) + " outside its domain");
    }
    prev_x = x;
    prev_d = d;
  }
  if (v.min_abs_derivative < m.sigma() * (1 - slack)) {
    throw InputError("sigma " + format_number(m.sigma()) + " exceeds the sampled minimum |psi'| " +
                     format_number(v.min_abs_derivative));
  }
  if (v.max_abs_derivative > m.delta() * (1 + slack)) {
    throw InputError("delta " + format_number(m.delta()) + " is below the sampled maximum |psi'| " +
                     format_number(v.max_abs_derivative));
  }
  if (m.curvature() && v.max_second_derivative > *m.curvature() * (1 + 1e-6) + slack) {
    throw InputError("B " + format_number(*m.curvature()) + " is below the sampled maximum |psi''| " +
                     format_number(v.max_second_derivative));
  }
  return v;
}

namespace {

template <Scalar T>
bool near(const T& x, const T& y, double tol) {
  if constexpr (is_exact_v<T>) {
    (void)tol;
    return x == y;
  } else {
    return std::fabs(x - y) <= tol * (1 + std::fabs(x) + std::fabs(y));
  }
}

template <Scalar T>
Interval<T> hutchinson_hull(const std::vector<MapDescriptor<T>>& maps, const Interval<T>& j,
                            std::size_t* low = nullptr, std::size_t* high = nullptr) {
  Interval<T> out = maps[0].image(j);
  std::size_t lo_i = 0;
  std::size_t hi_i = 0;
  for (std::size_t i = 1; i < maps.size(); ++i) {
    Interval<T> im = maps[i].image(j);
    if (im.lo < out.lo) {
      out.lo = im.lo;
      lo_i = i;
    }
    if (out.hi < im.hi) {
      out.hi = im.hi;
      hi_i = i;
    }
  }
  if (low) *low = lo_i;
  if (high) *high = hi_i;
  return out;
}

template <Scalar T>
T map_fixed_point(const MapDescriptor<T>& m, const std::optional<Interval<T>>& domain, double tol) {
  if (m.is_affine()) {
    if (m.slope() == 1) throw InputError("map with slope 1 has no unique fixed point");
    return m.offset() / (T(1) - m.slope());
  }
  if constexpr (is_exact_v<T>) {
    throw InputError("smooth maps are only supported with floating-point data");
  } else {
    auto dom = m.domain() ? m.domain() : domain;
    if (!dom) throw InputError("smooth map has no domain");
    double x = dom->midpoint();
    for (int it = 0; it < 100'000; ++it) {
      double y = m(x);
      if (std::fabs(y - x) <= tol) return y;
      x = y;
    }
    throw NonConvergence("fixed-point iteration of a smooth map did not settle");
  }
}

template <Scalar T>
struct HullResult {
  Interval<T> hull;
  HullWitness witness;
};

template <Scalar T>
HullResult<T> compute_hull(const std::vector<MapDescriptor<T>>& maps, const std::optional<Interval<T>>& domain,
                           double tol) {
  const std::size_t n = maps.size();
  std::vector<T> fixed;
  fixed.reserve(n);
  for (const auto& m : maps) fixed.push_back(map_fixed_point(m, domain, tol));
  bool distinct = false;
  for (std::size_t i = 1; i < n; ++i) {
    if (!near(fixed[i], fixed[0], tol)) distinct = true;
  }
  if (!distinct) throw DegenerateAttractor("all maps share one fixed point; the attractor is a single point");

  bool all_affine = std::all_of(maps.begin(), maps.end(), [](const auto& m) { return m.is_affine(); });
  if (all_affine) {
    auto accept = [&](const T& m, const T& big) {
      if (!(m < big)) return false;
      Interval<T> h = hutchinson_hull(maps, Interval<T>(m, big));
      return near(h.lo, m, tol) && near(h.hi, big, tol);
    };
    for (int which = 1; which <= 4; ++which) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (i == j) continue;
          T m;
          T big;
          switch (which) {
            case 1:
              m = fixed[i];
              big = fixed[j];
              break;
            case 2:
              m = fixed[i];
              big = maps[j](m);
              break;
            case 3:
              big = fixed[j];
              m = maps[i](big);
              break;
            default:
              m = map_fixed_point(maps[i].after(maps[j]), domain, tol);
              big = maps[j](m);
              break;
          }
          if (accept(m, big)) return {Interval<T>(m, big), HullWitness{i, j, which}};
        }
      }
    }
  }

  // Iterate the hull map from an interval known to contain the attractor.
  Interval<T> cur;
  if (domain) {
    cur = *domain;
  } else {
    T span = *std::max_element(fixed.begin(), fixed.end()) - *std::min_element(fixed.begin(), fixed.end());
    T lo = *std::min_element(fixed.begin(), fixed.end()) - span;
    T hi = *std::max_element(fixed.begin(), fixed.end()) + span;
    cur = Interval<T>(lo, hi);
  }
  std::size_t low = 0;
  std::size_t high = 0;
  for (int it = 0; it < 100'000; ++it) {
    Interval<T> next = hutchinson_hull(maps, cur, &low, &high);
    bool done = near(next.lo, cur.lo, tol) && near(next.hi, cur.hi, tol);
    cur = next;
    if (done) return {cur, HullWitness{low, high, 0}};
  }
  throw NonConvergence("hull iteration did not settle");
}

template <Scalar T>
std::shared_ptr<const Ifs<T>> share(const Ifs<T>& f) {
  return std::make_shared<const Ifs<T>>(f);
}

template <Scalar T>
class IfsConstruction final : public Construction<T> {
 public:
  IfsConstruction(std::shared_ptr<const Ifs<T>> f, Interval<T> base, MapDescriptor<T> composite,
                  std::optional<std::vector<T>> ratios, std::optional<T> floor)
      : f_(std::move(f)),
        base_(std::move(base)),
        composite_(std::move(composite)),
        ratios_(std::move(ratios)),
        floor_(std::move(floor)) {}

  Interval<T> root() const override { return composite_.image(base_); }

  ConstructionPtr<T> child(int j) const override {
    MapDescriptor<T> c0 = composite_.after((*f_)[0]);
    MapDescriptor<T> c1 = composite_.after((*f_)[1]);
    bool swap = c1.image(base_).lo < c0.image(base_).lo;
    const MapDescriptor<T>& pick = (j == 0) != swap ? c0 : c1;
    return std::make_shared<IfsConstruction>(f_, base_, pick, ratios_, floor_);
  }

  Backing backing() const override { return Backing::ifs; }
  std::optional<std::vector<T>> ratio_set() const override { return ratios_; }
  std::optional<T> proven_ratio_bound() const override { return floor_; }

 private:
  std::shared_ptr<const Ifs<T>> f_;
  Interval<T> base_;
  MapDescriptor<T> composite_;
  std::optional<std::vector<T>> ratios_;
  std::optional<T> floor_;
};

}  // namespace

template <Scalar T>
Ifs<T>::Ifs(std::vector<MapDescriptor<T>> maps, std::optional<Interval<T>> domain) : maps_(std::move(maps)) {
  if (maps_.size() < 2) throw InputError("an IFS needs at least two maps");
  for (std::size_t i = 0; i < maps_.size(); ++i) {
    const auto& m = maps_[i];
    std::string where = "maps[" + std::to_string(i) + "]";
    if (m.is_affine()) {
      if (m.slope() == 0) throw InputError(where + ": slope must be non-zero");
      if (!(abs_value(m.slope()) < T(1))) throw InputError(where + ": |slope| must be < 1");
    } else {
      if (!(T(0) < m.sigma()) || m.delta() < m.sigma() || !(m.delta() < T(1))) {
        throw InputError(where + ": bounds must satisfy 0 < sigma <= delta < 1");
      }
      if (!m.curvature() || *m.curvature() < T(0)) throw InputError(where + ": B must be >= 0");
      if (!domain) domain = m.domain();
    }
  }
  for (std::size_t i = 0; i < maps_.size(); ++i) {
    if constexpr (!is_exact_v<T>) {
      if (!maps_[i].is_affine()) {
        try {
          validations_.push_back(validate_smooth(maps_[i]));
        } catch (const InputError& e) {
          throw InputError("maps[" + std::to_string(i) + "]: " + e.what());
        }
      }
    }
  }
  auto h = compute_hull(maps_, domain, kFloatTolerance);
  if (domain) {
    for (std::size_t i = 0; i < maps_.size(); ++i) {
      if (!maps_[i].is_affine()) continue;
      Interval<T> im = maps_[i].image(*domain);
      if (!domain->contains(im)) {
        throw InputError("maps[" + std::to_string(i) + "] does not send the domain into itself");
      }
    }
    domain_ = *domain;
  } else {
    domain_ = h.hull;
  }
}

template <Scalar T>
bool Ifs<T>::all_affine() const {
  return std::all_of(maps_.begin(), maps_.end(), [](const auto& m) { return m.is_affine(); });
}

template <Scalar T>
MapDescriptor<T> compose_map(const Ifs<T>& f, const IfsWord& v) {
  MapDescriptor<T> out = MapDescriptor<T>::identity();
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k] >= f.size()) {
      throw InputError("map index " + std::to_string(v[k]) + " out of range for " + std::to_string(f.size()) +
                       " maps");
    }
    out = k == 0 ? f[v[k]] : out.after(f[v[k]]);
  }
  return out;
}

template <Scalar T>
T fixed_point(const MapDescriptor<T>& m, double tol) {
  return map_fixed_point(m, std::optional<Interval<T>>{}, tol);
}

template <Scalar T>
AttractorBounds<T> attractor_bounds(const Ifs<T>& f, std::size_t n, std::size_t budget) {
  AttractorBounds<T> out;
  for (const auto& m : f.maps()) out.inner.push_back(map_fixed_point(m, std::optional<Interval<T>>(f.domain()), kFloatTolerance));
  std::sort(out.inner.begin(), out.inner.end());
  out.inner.erase(std::unique(out.inner.begin(), out.inner.end()), out.inner.end());
  out.outer = IntervalUnion<T>::single(hull(f));
  for (std::size_t k = 0; k < n; ++k) {
    if (std::max(out.outer.size(), out.inner.size()) > budget / f.size()) {
      throw BudgetError("outer bound would exceed the interval budget at depth " + std::to_string(k + 1),
                        out.outer.size());
    }
    std::vector<Interval<T>> pieces;
    pieces.reserve(out.outer.size() * f.size());
    std::vector<T> pts;
    pts.reserve(out.inner.size() * f.size());
    for (const auto& m : f.maps()) {
      for (const auto& iv : out.outer) pieces.push_back(m.image(iv));
      for (const auto& x : out.inner) pts.push_back(m(x));
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    out.inner = std::move(pts);
    out.outer = IntervalUnion<T>::from_pieces(std::move(pieces));
  }
  return out;
}

template <Scalar T>
Interval<T> hull(const Ifs<T>& f, double tol) {
  return compute_hull(f.maps(), std::optional<Interval<T>>(f.domain()), tol).hull;
}

template <Scalar T>
HullWitness hull_witness(const Ifs<T>& f, double tol) {
  return compute_hull(f.maps(), std::optional<Interval<T>>(f.domain()), tol).witness;
}

template <Scalar T>
Ifs<T> extreme_submaps(const Ifs<T>& f) {
  if (f.size() == 2) return f;
  HullWitness w = hull_witness(f);
  std::size_t i = std::min(w.low_map, w.high_map);
  std::size_t j = std::max(w.low_map, w.high_map);
  if (i == j) {
    // Iteration found one map at both ends; pair it with the map reaching furthest the other way.
    Interval<T> h = hull(f);
    std::optional<std::size_t> best;
    T best_hi(0);
    for (std::size_t k = 0; k < f.size(); ++k) {
      if (k == i) continue;
      T hi = f[k].image(h).hi;
      if (!best || best_hi < hi) {
        best = k;
        best_hi = hi;
      }
    }
    j = *best;
    if (j < i) std::swap(i, j);
  }
  return Ifs<T>({f[i], f[j]}, f.domain());
}

template <Scalar T>
T ratio_floor(const Ifs<T>& f) {
  T sigma = f[0].sigma();
  for (const auto& m : f.maps()) sigma = std::min(sigma, m.sigma());
  if (f.all_affine()) return sigma;
  if constexpr (is_exact_v<T>) {
    throw InputError("smooth maps are only supported with floating-point data");
  } else {
    double delta = 0;
    double curvature = 0;
    for (const auto& m : f.maps()) {
      delta = std::max(delta, m.delta());
      curvature = std::max(curvature, m.curvature().value_or(0.0));
    }
    return sigma * std::exp(-curvature * f.domain().diameter() / (sigma * (1 - delta)));
  }
}

template <Scalar T>
ConstructionPtr<T> ifs_construction(const Ifs<T>& f, const IfsWord& prefix) {
  if (f.size() != 2) throw InputError("the two-map construction needs exactly two maps");
  Interval<T> h = hull(f);
  Interval<T> i0 = f[0].image(h);
  Interval<T> i1 = f[1].image(h);
  if (i1.lo < i0.lo) std::swap(i0, i1);
  if (!(i0.hi < i1.lo)) throw OverlapError("first-level images overlap or touch; the attractor is an interval");
  std::optional<std::vector<T>> ratios;
  if (f.all_affine()) ratios = std::vector<T>{f[0].sigma(), f[1].sigma()};
  return std::make_shared<IfsConstruction<T>>(share(f), h, compose_map(f, prefix), std::move(ratios),
                                              ratio_floor(f));
}

template <Scalar T>
std::variant<Interval<T>, ConstructionPtr<T>> two_map_construction(const Ifs<T>& f) {
  if (f.size() != 2) throw InputError("the two-map construction needs exactly two maps");
  Interval<T> h = hull(f);
  Interval<T> i0 = f[0].image(h);
  Interval<T> i1 = f[1].image(h);
  if (i1.lo < i0.lo) std::swap(i0, i1);
  if (!(i0.hi < i1.lo)) return h;
  return ifs_construction(f);
}

#define CANTOR_INSTANTIATE_IFS(T)                                                                    \
  template class MapDescriptor<T>;                                                                   \
  template class Ifs<T>;                                                                             \
  template MapDescriptor<T> compose_map<T>(const Ifs<T>&, const IfsWord&);                           \
  template T fixed_point<T>(const MapDescriptor<T>&, double);                                        \
  template AttractorBounds<T> attractor_bounds<T>(const Ifs<T>&, std::size_t, std::size_t);          \
  template Interval<T> hull<T>(const Ifs<T>&, double);                                               \
  template HullWitness hull_witness<T>(const Ifs<T>&, double);                                       \
  template Ifs<T> extreme_submaps<T>(const Ifs<T>&);                                                 \
  template T ratio_floor<T>(const Ifs<T>&);                                                          \
  template ConstructionPtr<T> ifs_construction<T>(const Ifs<T>&, const IfsWord&);                    \
  template std::variant<Interval<T>, ConstructionPtr<T>> two_map_construction<T>(const Ifs<T>&);

CANTOR_INSTANTIATE_IFS(Rational)
CANTOR_INSTANTIATE_IFS(double)

}  // namespace cantor
