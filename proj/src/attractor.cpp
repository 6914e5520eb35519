#include "cantor/attractor.hpp"

#include "cantor/errors.hpp"
#include "cantor/setops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <utility>

namespace cantor {

template <Scalar T>
Interval<T> FirstGeneration<T>::hull() const {
  if (is_construction()) return construction()->root();
  return cantor::hull(ifs());
}

template <Scalar T>
IntervalUnion<T> FirstGeneration<T>::outer(std::size_t depth) const {
  if (is_construction()) {
    const auto& c = construction();
    if (auto rem = c->remaining_depth(); rem && depth > *rem) depth = *rem;
    return cover(c, depth);
  }
  return attractor_bounds(ifs(), depth).outer;
}

template <Scalar T>
std::vector<T> FirstGeneration<T>::inner(std::size_t depth) const {
  if (is_construction()) return outer(depth).endpoints();
  return attractor_bounds(ifs(), depth).inner;
}

template <Scalar T>
T compose_phi(const T& alpha, const std::vector<T>& betas, const T& x) {
  if (betas.empty()) return x;
  T an = power(alpha, static_cast<int>(betas.size()));
  T sum(0);
  T ai(1);
  for (const auto& b : betas) {
    ai *= alpha;
    sum += b / ai;
  }
  return an * x + an * (T(1) - alpha) * sum;
}

template <Scalar T>
CoverSelection<T> select_cover(const ConstructionPtr<T>& k, const T& alpha, std::size_t l, const T& a) {
  if (!(T(0) < a)) throw InputError("cover selection needs a positive ratio bound");
  CoverSelection<T> out;
  out.level = l;
  T amp = k->root().diameter();
  out.window_lo = amp * power(alpha, static_cast<int>(l));
  out.window_hi = out.window_lo / a;
  std::vector<std::pair<ConstructionPtr<T>, BinaryWord>> stack{{k, BinaryWord{}}};
  while (!stack.empty()) {
    auto [node, word] = std::move(stack.back());
    stack.pop_back();
    auto c0 = node->child(0);
    auto c1 = node->child(1);
    if (c0->root().diameter() < out.window_lo || c1->root().diameter() < out.window_lo) {
      out.pieces.push_back(node->root());
      out.words.push_back(std::move(word));
      continue;
    }
    stack.emplace_back(std::move(c1), word.child(1));
    stack.emplace_back(std::move(c0), word.child(0));
  }
  return out;
}

template <Scalar T>
CoverSelection<T> select_cover(const Ifs<T>& f, const T& alpha, std::size_t l) {
  if (l == 0) throw InputError("the IFS cover selection needs l >= 1");
  CoverSelection<T> out;
  out.level = l;
  Interval<T> h = hull(f);
  out.window_hi = h.diameter() * power(alpha, static_cast<int>(l));
  out.window_lo = ratio_floor(f) * out.window_hi;
  std::vector<std::pair<MapDescriptor<T>, IfsWord>> stack{{MapDescriptor<T>::identity(), IfsWord{}}};
  while (!stack.empty()) {
    auto [m, word] = std::move(stack.back());
    stack.pop_back();
    Interval<T> piece = m.image(h);
    if (piece.diameter() <= out.window_hi) {
      out.pieces.push_back(piece);
      out.ifs_words.push_back(std::move(word));
      continue;
    }
    for (std::size_t i = f.size(); i-- > 0;) stack.emplace_back(m.after(f[i]), word.child(i));
  }
  std::vector<std::size_t> order(out.pieces.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return out.pieces[x].lo < out.pieces[y].lo; });
  std::vector<Interval<T>> pieces;
  std::vector<IfsWord> words;
  for (auto i : order) {
    pieces.push_back(out.pieces[i]);
    words.push_back(out.ifs_words[i]);
  }
  out.pieces = std::move(pieces);
  out.ifs_words = std::move(words);
  return out;
}

template <Scalar T>
T merge_tolerance(const Interval<T>& hull) {
  if constexpr (is_exact_v<T>) {
    (void)hull;
    return T(0);
  } else {
    return 4 * std::numeric_limits<double>::epsilon() * hull.diameter();
  }
}

namespace {

template <Scalar T>
IntervalUnion<T> series_outer(const IntervalUnion<T>& cov, const T& alpha, std::size_t n, const T& tau,
                              std::size_t budget) {
  IntervalUnion<T> acc;
  T scale = T(1) - alpha;
  for (std::size_t j = 0; j < n; ++j) {
    IntervalUnion<T> term = cov.affine_image(scale, T(0));
    acc = j == 0 ? term : minkowski_sum(acc, term, tau, budget);
    scale *= alpha;
  }
  return acc;
}

template <Scalar T>
bool same_union(const IntervalUnion<T>& x, const IntervalUnion<T>& y, double tol) {
  if constexpr (is_exact_v<T>) {
    (void)tol;
    return x == y;
  } else {
    return x.size() == y.size() && to_double(hausdorff_distance(x, y)) <= tol;
  }
}

template <Scalar T>
void check_alpha(const T& alpha) {
  if (!(T(0) < alpha) || !(alpha < T(1))) throw InputError("alpha must lie in ]0,1[");
}

template <Scalar T>
void solve_tail(const IntervalUnion<T>& j, const Interval<T>& h, const T& alpha, std::size_t n,
                const AttractorOptions& opts, AttractorResult<T>& out) {
  const T tau = merge_tolerance(h);
  const T an = power(alpha, static_cast<int>(n));
  IntervalUnion<T> u = IntervalUnion<T>::single(h);
  for (std::size_t it = 1; it <= opts.iter_max; ++it) {
    IntervalUnion<T> next = minkowski_sum(j, u.affine_image(an, T(0)), tau, opts.budget);
    double disp = to_double(hausdorff_distance(next, u));
    out.displacements.push_back(disp);
    bool exact = next == u;
    out.merged_gaps = next.merged_gaps();
    u = std::move(next);
    if (exact || disp <= opts.tol) {
      out.iterations = it;
      out.set = std::move(u);
      return;
    }
  }
  throw NonConvergence("tail iteration did not reach displacement " + format_number(opts.tol) + " within " +
                       std::to_string(opts.iter_max) + " iterations (last " +
                       format_number(out.displacements.back()) + ")");
}

template <Scalar T>
struct PieceTerm {
  IntervalUnion<T> hulls;
};

template <Scalar T>
T certified_gap(const ConstructionPtr<T>& piece) {
  for (std::size_t depth = 4; depth <= 16; depth += 4) {
    auto g = max_gap(piece, depth);
    if (g.exhaustive) return g.width;
    if (auto rem = piece->remaining_depth(); rem && *rem <= depth) break;
  }
  throw CertificateError("could not certify the widest gap of a selected piece");
}

template <Scalar T>
std::optional<std::size_t> cabrelli_terms(const T& a, std::size_t cap) {
  for (std::size_t m = 1; m <= cap; ++m) {
    if (cabrelli_check(a, m)) return m;
  }
  return std::nullopt;
}

template <Scalar T>
void certified_attractor(const SecondGenSpec<T>& spec, const AttractorOptions& opts, AttractorResult<T>& out) {
  const FirstGeneration<T>& k = spec.first_gen;
  const T& alpha = spec.alpha;
  const Interval<T> h = k.hull();
  const T tau = merge_tolerance(h);
  CertifiedDetail<T> det;
  det.amplitude = h.diameter();

  std::optional<Ifs<T>> sub;
  if (k.is_construction()) {
    auto b = usable_ratio_bound(k.construction(), 0, false);
    if (!b) throw CertificateError("certified mode needs a construction with a proven ratio bound");
    det.a = *b;
    det.route = "construction";
  } else {
    sub = extreme_submaps(k.ifs());
    if (std::holds_alternative<Interval<T>>(two_map_construction(*sub))) {
      // The sub-attractor already fills the hull, so K is the hull.
      std::size_t n = opts.n_override.value_or(1);
      out.n = out.stabilization_n = n;
      T scale = T(1) - power(alpha, static_cast<int>(n));
      out.partial_sum = IntervalUnion<T>::single(Interval<T>(scale * h.lo, scale * h.hi));
      det.route = "interval";
      det.a = ratio_floor(k.ifs());
      out.guarantee = "interval";
      out.certificate = det;
      solve_tail(out.partial_sum, h, alpha, n, opts, out);
      return;
    }
    if (!k.ifs().all_affine() && k.ifs().size() != 2) {
      throw CertificateError("certified mode needs affine maps when the IFS has more than two maps");
    }
    det.a = ratio_floor(k.ifs());
    det.route = "ifs";
  }

  // Count bound from the amplitude ratio: reported always, used only when n can reach it.
  {
    T a1 = det.route == "ifs" ? T(det.a * det.amplitude) : det.amplitude;
    T a2 = det.route == "ifs" ? det.amplitude : T(det.amplitude / det.a);
    T q = a2 / a1;
    if (to_double(q) < 64 && det.a < T(1)) det.count_bound = geometric_count(a1, a2, det.a);
  }

  auto need = cabrelli_terms(det.a, opts.n_max);
  if (!need) {
    throw CertificateError("Cabrelli inequality needs more than " + std::to_string(opts.n_max) +
                           " terms at a = " + format_number(det.a));
  }
  det.cabrelli_terms = *need;
  std::size_t n0 = std::max(*need, opts.n_override.value_or(1));
  std::string last_failure;
  for (std::size_t n = n0; n < n0 + 3 && n <= opts.n_max; ++n) {
    std::vector<PieceTerm<T>> terms;
    bool first = true;
    T min_d(0);
    T max_g(0);
    std::size_t pieces = 0;
    T scale = T(1) - alpha;
    for (std::size_t j = 0; j < n; ++j, scale *= alpha) {
      std::size_t l = n - j;
      std::vector<ConstructionPtr<T>> cons;
      CoverSelection<T> sel;
      if (k.is_construction()) {
        sel = select_cover(k.construction(), alpha, l, det.a);
        for (const auto& w : sel.words) cons.push_back(subtree(k.construction(), w));
      } else {
        sel = select_cover(k.ifs(), alpha, l);
        for (const auto& v : sel.ifs_words) {
          if (k.ifs().size() == 2) {
            cons.push_back(ifs_construction(k.ifs(), v));
          } else {
            MapDescriptor<T> m = compose_map(k.ifs(), v);
            cons.push_back(affine_image(ifs_construction(*sub), m.slope(), m.offset()));
          }
        }
      }
      PieceTerm<T> term;
      std::vector<Interval<T>> hulls;
      for (const auto& c : cons) {
        Interval<T> r = c->root();
        T d = r.diameter() * scale;
        T g = certified_gap(c) * scale;
        if (first || d < min_d) min_d = d;
        if (first || max_g < g) max_g = g;
        first = false;
        hulls.push_back(r.affine_image(scale, T(0)));
      }
      pieces += cons.size();
      term.hulls = IntervalUnion<T>::from_pieces(std::move(hulls), tau);
      terms.push_back(std::move(term));
    }
    bool count_ok = det.count_bound && BigInt(static_cast<unsigned long>(n)) >= *det.count_bound;
    bool pieces_ok = cabrelli_check(det.a, n) && max_g < min_d;
    if (!count_ok && !pieces_ok) {
      last_failure = "n = " + std::to_string(n) + ": widest piece gap " + format_number(max_g) +
                     " is not below the smallest piece diameter " + format_number(min_d);
      continue;
    }
    IntervalUnion<T> j = terms[0].hulls;
    for (std::size_t t = 1; t < terms.size(); ++t) j = minkowski_sum(j, terms[t].hulls, tau, opts.budget);
    det.min_piece_diameter = min_d;
    det.max_piece_gap = max_g;
    det.pieces = pieces;
    out.n = out.stabilization_n = n;
    out.partial_sum = std::move(j);
    out.guarantee = count_ok ? "count" : "piecewise-cabrelli";
    out.certificate = det;
    solve_tail(out.partial_sum, h, alpha, n, opts, out);
    return;
  }
  throw CertificateError("no certificate found: " + last_failure);
}

}  // namespace

template <Scalar T>
PartialSum<T> partial_geometric_sum(const FirstGeneration<T>& k, const T& alpha, std::size_t n, std::size_t depth,
                                    std::size_t budget, bool with_inner) {
  check_alpha(alpha);
  if (n == 0) throw InputError("partial sum needs n >= 1");
  Interval<T> h = k.hull();
  T tau = merge_tolerance(h);
  PartialSum<T> out;
  out.outer = series_outer(k.outer(depth), alpha, n, tau, budget);
  if (with_inner) {
    std::vector<T> base = k.inner(depth);
    std::vector<T> acc{T(0)};
    T scale = T(1) - alpha;
    for (std::size_t j = 0; j < n; ++j, scale *= alpha) {
      if (acc.size() > budget / base.size()) {
        throw BudgetError("inner point sum would exceed the budget at term " + std::to_string(j + 1), acc.size());
      }
      std::vector<T> next;
      next.reserve(acc.size() * base.size());
      for (const auto& x : acc) {
        for (const auto& b : base) next.push_back(x + scale * b);
      }
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
      acc = std::move(next);
    }
    out.inner = std::move(acc);
  }
  return out;
}

std::string_view to_string(Mode m) { return m == Mode::certified ? "certified" : "empirical"; }

template <Scalar T>
AttractorResult<T> second_gen_attractor(const SecondGenSpec<T>& spec, const AttractorOptions& opts) {
  check_alpha(spec.alpha);
  AttractorResult<T> out;
  if (opts.mode == Mode::certified) {
    certified_attractor(spec, opts, out);
    return out;
  }
  const FirstGeneration<T>& k = spec.first_gen;
  const T& alpha = spec.alpha;
  const Interval<T> h = k.hull();
  const T tau = merge_tolerance(h);
  std::size_t depth_cap = opts.depth_max;
  if (k.is_construction()) {
    if (auto rem = k.construction()->remaining_depth(); rem) depth_cap = std::min(depth_cap, *rem);
  }
  std::map<std::size_t, IntervalUnion<T>> covers;
  auto cover_at = [&](std::size_t d) -> const IntervalUnion<T>& {
    auto it = covers.find(d);
    if (it == covers.end()) it = covers.emplace(d, k.outer(d)).first;
    return it->second;
  };

  struct Converged {
    IntervalUnion<T> j;
    std::size_t depth = 0;
    bool converged = false;
  };
  auto converged_sum = [&](std::size_t n) {
    Converged c;
    std::optional<IntervalUnion<T>> prev;
    for (std::size_t d = std::min<std::size_t>(1, depth_cap); d <= depth_cap; ++d) {
      IntervalUnion<T> j = series_outer(cover_at(d), alpha, n, tau, opts.budget);
      if (prev && same_union(j, *prev, opts.tol)) {
        c.j = std::move(j);
        c.depth = d;
        c.converged = true;
        return c;
      }
      prev = std::move(j);
    }
    c.j = std::move(*prev);
    c.depth = depth_cap;
    return c;
  };

  Converged term;
  if (opts.n_override) {
    if (*opts.n_override == 0) throw InputError("the series needs at least one term");
    out.stabilization_n = *opts.n_override;
    term = converged_sum(*opts.n_override);
  } else {
    std::optional<std::size_t> prev_count;
    const double width = to_double(h.diameter());
    for (std::size_t n = 1; n <= opts.n_max; ++n) {
      term = converged_sum(n);
      double tail = std::pow(to_double(alpha), static_cast<double>(n)) * width;
      auto gap = term.j.min_gap();
      bool small_tail = !gap || tail < to_double(*gap) / 2 || tail <= opts.tol;
      if (prev_count && *prev_count == term.j.size() && small_tail) {
        out.stabilization_n = n;
        break;
      }
      prev_count = term.j.size();
    }
    if (out.stabilization_n == 0) {
      throw NonConvergence("interval count did not stabilize within " + std::to_string(opts.n_max) + " terms");
    }
    if (opts.extra_terms > 0) term = converged_sum(out.stabilization_n + opts.extra_terms);
  }
  out.n = out.stabilization_n + (opts.n_override ? 0 : opts.extra_terms);
  out.depth = term.depth;
  out.depth_converged = term.converged;
  out.partial_sum = term.j;
  out.guarantee = "empirical";
  solve_tail(term.j, h, alpha, out.n, opts, out);
  return out;
}

template <Scalar T>
std::vector<OpenInterval<T>> n_epsilon(const FirstGeneration<T>& k, const T& alpha, const T& eps,
                                       std::size_t depth) {
  check_alpha(alpha);
  if (eps < T(0)) throw InputError("epsilon must be >= 0");
  Interval<T> h = k.hull();
  IntervalUnion<T> scaled = k.outer(depth).affine_image(T(1) - alpha, T(0));
  std::vector<OpenInterval<T>> out;
  for (const auto& g : scaled.gaps()) {
    T lo = g.lo + alpha * h.hi + eps;
    T hi = g.hi + alpha * h.lo - eps;
    if (lo < hi) out.push_back(OpenInterval<T>{lo, hi});
  }
  return out;
}

template <Scalar T>
bool sandwich_check(const SecondGenSpec<T>& spec, const IntervalUnion<T>& attractor, std::size_t depth) {
  if (attractor.empty()) return false;
  const FirstGeneration<T>& k = spec.first_gen;
  Interval<T> h = k.hull();
  T slack(0);
  if constexpr (!is_exact_v<T>) slack = 1e-12 * (1 + h.diameter());
  for (const auto& x : k.inner(depth)) {
    if (slack < distance_to(x, attractor)) return false;
  }
  IntervalUnion<T> band = neighbourhood(k.outer(depth), T(spec.alpha * h.diameter() + slack));
  return attractor.subset_of(band);
}

#define CANTOR_INSTANTIATE_ATTRACTOR(T)                                                                       \
  template class FirstGeneration<T>;                                                                          \
  template T compose_phi<T>(const T&, const std::vector<T>&, const T&);                                       \
  template CoverSelection<T> select_cover<T>(const ConstructionPtr<T>&, const T&, std::size_t, const T&);     \
  template CoverSelection<T> select_cover<T>(const Ifs<T>&, const T&, std::size_t);                           \
  template T merge_tolerance<T>(const Interval<T>&);                                                          \
  template PartialSum<T> partial_geometric_sum<T>(const FirstGeneration<T>&, const T&, std::size_t,          \
                                                  std::size_t, std::size_t, bool);                            \
  template AttractorResult<T> second_gen_attractor<T>(const SecondGenSpec<T>&, const AttractorOptions&);      \
  template std::vector<OpenInterval<T>> n_epsilon<T>(const FirstGeneration<T>&, const T&, const T&,          \
                                                     std::size_t);                                            \
  template bool sandwich_check<T>(const SecondGenSpec<T>&, const IntervalUnion<T>&, std::size_t);

CANTOR_INSTANTIATE_ATTRACTOR(Rational)
CANTOR_INSTANTIATE_ATTRACTOR(double)

}  // namespace cantor
