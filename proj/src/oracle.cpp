#include "cantor/oracle.hpp"

#include "cantor/errors.hpp"

#include <algorithm>
#include <functional>
#include <string>

namespace cantor {

template <Scalar T>
GridSet<T>::GridSet(T origin, T h) : origin_(std::move(origin)), h_(std::move(h)) {
  if (!(T(0) < h_)) throw InputError("grid step must be positive");
}

template <Scalar T>
GridSet<T>::GridSet(T origin, T h, std::vector<Run> runs) : GridSet(std::move(origin), std::move(h)) {
  runs_ = std::move(runs);
  normalize();
}

template <Scalar T>
void GridSet<T>::normalize() {
  std::sort(runs_.begin(), runs_.end());
  std::vector<Run> out;
  out.reserve(runs_.size());
  for (const auto& r : runs_) {
    if (r.second < r.first) throw InvariantViolation("grid run with end before start");
    if (!out.empty() && r.first <= out.back().second + 1) {
      out.back().second = std::max(out.back().second, r.second);
    } else {
      out.push_back(r);
    }
  }
  runs_ = std::move(out);
}

template <Scalar T>
std::int64_t GridSet<T>::cell_of(const T& x) const {
  return floor_to_int(T((x - origin_) / h_));
}

template <Scalar T>
typename GridSet<T>::Run GridSet<T>::cell_range(const T& lo, const T& hi) const {
  std::int64_t k0 = floor_to_int(T((lo - origin_) / h_));
  std::int64_t k1 = ceil_to_int(T((hi - origin_) / h_)) - 1;
  return {k0, std::max(k0, k1)};
}

template <Scalar T>
GridSet<T> GridSet<T>::rasterize(const IntervalUnion<T>& u, const T& origin, const T& h) {
  GridSet g(origin, h);
  g.runs_.reserve(u.size());
  for (const auto& iv : u) g.runs_.push_back(g.cell_range(iv.lo, iv.hi));
  g.normalize();
  return g;
}

template <Scalar T>
GridSet<T> GridSet<T>::from_cells(const T& origin, const T& h, std::vector<std::int64_t> cells) {
  std::vector<Run> runs;
  runs.reserve(cells.size());
  for (auto k : cells) runs.emplace_back(k, k);
  return GridSet(origin, h, std::move(runs));
}

template <Scalar T>
std::vector<std::int64_t> GridSet<T>::cells() const {
  std::vector<std::int64_t> out;
  out.reserve(count());
  for (const auto& [a, b] : runs_) {
    for (auto k = a; k <= b; ++k) out.push_back(k);
  }
  return out;
}

template <Scalar T>
std::size_t GridSet<T>::count() const {
  std::size_t n = 0;
  for (const auto& [a, b] : runs_) n += static_cast<std::size_t>(b - a + 1);
  return n;
}

template <Scalar T>
bool GridSet<T>::occupied(std::int64_t k) const {
  auto it = std::upper_bound(runs_.begin(), runs_.end(), k, [](std::int64_t v, const Run& r) { return v < r.first; });
  if (it == runs_.begin()) return false;
  --it;
  return k <= it->second;
}

template <Scalar T>
IntervalUnion<T> GridSet<T>::to_union() const {
  std::vector<Interval<T>> ivs;
  ivs.reserve(runs_.size());
  for (const auto& [a, b] : runs_) {
    ivs.emplace_back(origin_ + T(static_cast<long>(a)) * h_, origin_ + T(static_cast<long>(b + 1)) * h_);
  }
  return IntervalUnion<T>::from_sorted(std::move(ivs));
}

namespace {

template <Scalar T>
GridSet<T> iterate_to_fixed(GridSet<T> a, std::size_t max_iter,
                            const std::function<std::vector<typename GridSet<T>::Run>(const GridSet<T>&)>& step,
                            const char* what) {
  for (std::size_t it = 0; it < max_iter; ++it) {
    GridSet<T> next(a.origin(), a.step(), step(a));
    if (next == a) return a;
    a = std::move(next);
  }
  throw NonConvergence(std::string(what) + " occupancy did not settle within " + std::to_string(max_iter) +
                       " iterations");
}

}  // namespace

template <Scalar T>
GridSet<T> grid_attractor(const Ifs<T>& f, const T& h, std::size_t max_iter) {
  Interval<T> hl = hull(f);
  GridSet<T> start = GridSet<T>::rasterize(IntervalUnion<T>::single(hl), hl.lo, h);
  return iterate_to_fixed<T>(
      std::move(start), max_iter,
      [&](const GridSet<T>& a) {
        std::vector<typename GridSet<T>::Run> runs;
        IntervalUnion<T> cur = a.to_union();
        runs.reserve(cur.size() * f.size());
        for (const auto& m : f.maps()) {
          for (const auto& iv : cur) {
            Interval<T> im = m.image(iv);
            runs.push_back(a.cell_range(im.lo, im.hi));
          }
        }
        return runs;
      },
      "grid attractor");
}

template <Scalar T>
GridSet<T> grid_minkowski(const GridSet<T>& a, const GridSet<T>& b) {
  if (!(a.step() == b.step())) throw ResolutionMismatch("grid sets have different steps");
  std::vector<typename GridSet<T>::Run> runs;
  runs.reserve(a.runs().size() * b.runs().size());
  for (const auto& [a0, a1] : a.runs()) {
    for (const auto& [b0, b1] : b.runs()) runs.emplace_back(a0 + b0, a1 + b1 + 1);
  }
  return GridSet<T>(a.origin() + b.origin(), a.step(), std::move(runs));
}

template <Scalar T>
GridSet<T> grid_second_gen(const std::vector<T>& betas, const Interval<T>& hl, const T& alpha, const T& h,
                           std::size_t max_iter) {
  if (betas.empty()) throw InputError("grid second-generation run needs at least one beta");
  if (!(T(0) < alpha) || !(alpha < T(1))) throw InputError("alpha must lie in ]0,1[");
  std::vector<T> shifts;
  shifts.reserve(betas.size());
  for (const auto& b : betas) shifts.push_back((T(1) - alpha) * b);
  GridSet<T> start = GridSet<T>::rasterize(IntervalUnion<T>::single(hl), hl.lo, h);
  return iterate_to_fixed<T>(
      std::move(start), max_iter,
      [&](const GridSet<T>& a) {
        IntervalUnion<T> cur = a.to_union().affine_image(alpha, T(0));
        std::vector<typename GridSet<T>::Run> runs;
        runs.reserve(cur.size() * shifts.size());
        for (const auto& s : shifts) {
          for (const auto& iv : cur) runs.push_back(a.cell_range(iv.lo + s, iv.hi + s));
        }
        return runs;
      },
      "grid second-generation");
}

template <Scalar T>
GridSet<T> grid_second_gen(const Ifs<T>& f, const T& alpha, const T& h, std::size_t beta_depth,
                           std::size_t max_iter) {
  if (beta_depth == 0) throw InputError("beta_depth must be >= 1");
  // U^n(fixed points) is dense in K even when the merged cover is one interval
  auto bounds = attractor_bounds(f, beta_depth);
  std::vector<T> betas = bounds.outer.endpoints();
  betas.insert(betas.end(), bounds.inner.begin(), bounds.inner.end());
  std::sort(betas.begin(), betas.end());
  betas.erase(std::unique(betas.begin(), betas.end()), betas.end());
  return grid_second_gen(betas, hull(f), alpha, h, max_iter);
}

template <Scalar T>
T hausdorff(const GridSet<T>& a, const GridSet<T>& b) {
  return hausdorff_distance(a.to_union(), b.to_union());
}

template <Scalar T>
T hausdorff(const GridSet<T>& a, const IntervalUnion<T>& b) {
  return hausdorff_distance(a.to_union(), b);
}

template <Scalar T>
T hausdorff(const IntervalUnion<T>& a, const GridSet<T>& b) {
  return hausdorff_distance(a, b.to_union());
}

template <Scalar T>
T hausdorff(const IntervalUnion<T>& a, const IntervalUnion<T>& b) {
  return hausdorff_distance(a, b);
}

#define CANTOR_INSTANTIATE_ORACLE(T)                                                                       \
  template class GridSet<T>;                                                                               \
  template GridSet<T> grid_attractor<T>(const Ifs<T>&, const T&, std::size_t);                             \
  template GridSet<T> grid_minkowski<T>(const GridSet<T>&, const GridSet<T>&);                             \
  template GridSet<T> grid_second_gen<T>(const std::vector<T>&, const Interval<T>&, const T&, const T&,    \
                                         std::size_t);                                                     \
  template GridSet<T> grid_second_gen<T>(const Ifs<T>&, const T&, const T&, std::size_t, std::size_t);     \
  template T hausdorff<T>(const GridSet<T>&, const GridSet<T>&);                                           \
  template T hausdorff<T>(const GridSet<T>&, const IntervalUnion<T>&);                                     \
  template T hausdorff<T>(const IntervalUnion<T>&, const GridSet<T>&);                                     \
  template T hausdorff<T>(const IntervalUnion<T>&, const IntervalUnion<T>&);

CANTOR_INSTANTIATE_ORACLE(Rational)
CANTOR_INSTANTIATE_ORACLE(double)

}  // namespace cantor
