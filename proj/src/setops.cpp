#include "cantor/setops.hpp"

#include "cantor/errors.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <utility>

namespace cantor {

template <Scalar T>
T aprime(const T& a) {
  if (!(T(0) < a)) throw InputError("aprime needs a > 0");
  T half = a / 2;
  T other = a * a / (a + 1);
  return other < half ? other : half;
}

template <Scalar T>
T a_m(const T& a, std::size_t m) {
  if (m == 0) throw InputError("a_m needs m >= 1");
  if (!(T(0) < a) || !(a < T(1))) throw InputError("a_m needs 0 < a < 1");
  T cur = a;
  for (std::size_t k = 1; k < m; ++k) cur = aprime(cur < a ? cur : a);
  return cur;
}

template <Scalar T>
T lemma7_a(const ConstructionPtr<T>& c1, const ConstructionPtr<T>& c2, const T& a1, const T& a2) {
  Interval<T> i1 = c1->root();
  Interval<T> i2 = c2->root();
  if (!(i1.hi < i2.lo)) {
    throw OverlapError("union inputs overlap: max of the first set " + format_number(i1.hi) +
                       " is not below min of the second " + format_number(i2.lo));
  }
  T q1 = i1.diameter() / (i2.lo - i1.lo);
  T q2 = i2.diameter() / (i2.hi - i1.hi);
  return std::min({q1, q2, a1, a2});
}

std::string_view to_string(UnionCase c) {
  switch (c) {
    case UnionCase::first: return "first";
    case UnionCase::second: return "second";
    case UnionCase::third: return "third";
    case UnionCase::fourth: return "fourth";
  }
  return "unknown";
}

template <Scalar T>
UnionCase UnionPlan<T>::classify(const BinaryWord& w) const {
  // The mirrored layout runs its spine along 0^n.
  const int spine = mirrored ? 0 : 1;
  std::size_t run = 0;
  while (run < w.size() && w[run] == spine) ++run;
  if (run == w.size() && run <= n_bar) return UnionCase::first;
  if (run >= n_bar && w.size() > n_bar) {
    // Off the spine lies the wider set, on it the narrower one.
    return w[n_bar] != spine ? UnionCase::second : UnionCase::third;
  }
  return UnionCase::fourth;
}

namespace {

template <Scalar T>
T required_bound(const ConstructionPtr<T>& c, const char* which) {
  auto b = usable_ratio_bound(c, 0, false);
  if (!b) throw CertificateError(std::string(which) + " input carries no ratio bound");
  return *b;
}

template <Scalar T>
struct UnionShared {
  ConstructionPtr<T> c1;
  ConstructionPtr<T> c2;
  UnionPlan<T> plan;
};

std::optional<std::size_t> min_opt(std::optional<std::size_t> x, std::optional<std::size_t> y) {
  if (!x) return y;
  if (!y) return x;
  return std::min(*x, *y);
}

std::optional<std::size_t> plus_opt(std::optional<std::size_t> x, std::size_t k) {
  if (!x) return x;
  return *x + k;
}

template <Scalar T>
class UnionConstruction final : public Construction<T> {
 public:
  UnionConstruction(std::shared_ptr<const UnionShared<T>> s, ConstructionPtr<T> spine, std::size_t level)
      : s_(std::move(s)), spine_(std::move(spine)), level_(level) {}

  Interval<T> root() const override {
    if (s_->plan.mirrored) return Interval<T>(s_->c1->root().lo, spine_->root().hi);
    return Interval<T>(spine_->root().lo, s_->c2->root().hi);
  }

  ConstructionPtr<T> child(int j) const override {
    const bool at_end = level_ == s_->plan.n_bar;
    if (!s_->plan.mirrored) {
      if (j == 0) return at_end ? spine_ : spine_->child(0);
      if (at_end) return s_->c2;
      return std::make_shared<UnionConstruction>(s_, spine_->child(1), level_ + 1);
    }
    if (j == 1) return at_end ? spine_ : spine_->child(1);
    if (at_end) return s_->c1;
    return std::make_shared<UnionConstruction>(s_, spine_->child(0), level_ + 1);
  }

  Backing backing() const override { return Backing::union_of_two; }
  std::optional<T> proven_ratio_bound() const override { return s_->plan.bound; }

  std::optional<std::size_t> remaining_depth() const override {
    const ConstructionPtr<T>& other = s_->plan.mirrored ? s_->c1 : s_->c2;
    std::size_t steps = s_->plan.n_bar - level_;
    auto spine_rem = spine_->remaining_depth();
    if (steps == 0) return plus_opt(min_opt(spine_rem, other->remaining_depth()), 1);
    return min_opt(spine_rem, plus_opt(other->remaining_depth(), steps + 1));
  }

 private:
  std::shared_ptr<const UnionShared<T>> s_;
  ConstructionPtr<T> spine_;
  std::size_t level_;
};

template <Scalar T>
class SumConstruction final : public Construction<T> {
 public:
  SumConstruction(ConstructionPtr<T> u, ConstructionPtr<T> v, T bound)
      : u_(std::move(u)), v_(std::move(v)), bound_(std::move(bound)) {}

  Interval<T> root() const override { return u_->root() + v_->root(); }

  ConstructionPtr<T> child(int j) const override {
    auto u0 = u_->child(0);
    auto v0 = v_->child(0);
    if (j == 0) return std::make_shared<SumConstruction>(u0, v0, bound_);
    auto u1 = u_->child(1);
    auto v1 = v_->child(1);
    T gu = u1->root().lo - u0->root().hi;
    T gv = v1->root().lo - v0->root().hi;
    ConstructionPtr<T> left;
    ConstructionPtr<T> right;
    if (gu <= gv) {
      left = translate(v1, u0->root().hi);
      right = translate(u1, v1->root().hi);
    } else {
      left = translate(u1, v0->root().hi);
      right = translate(v1, u1->root().hi);
    }
    return union_construct(left, right);
  }

  Backing backing() const override { return Backing::sum; }
  std::optional<T> proven_ratio_bound() const override { return bound_; }
  std::optional<std::size_t> remaining_depth() const override {
    return min_opt(u_->remaining_depth(), v_->remaining_depth());
  }

 private:
  ConstructionPtr<T> u_;
  ConstructionPtr<T> v_;
  T bound_;
};

template <Scalar T>
BigInt ceil_big(const T& x) {
  if constexpr (is_exact_v<T>) {
    BigInt q;
    mpz_cdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return q;
  } else {
    return BigInt(std::ceil(x));
  }
}

template <Scalar T>
BigInt floor_big(const T& x) {
  if constexpr (is_exact_v<T>) {
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return q;
  } else {
    return BigInt(std::floor(x));
  }
}

}  // namespace

template <Scalar T>
UnionPlan<T> union_plan(const ConstructionPtr<T>& c1, const ConstructionPtr<T>& c2) {
  T a1 = required_bound(c1, "first");
  T a2 = required_bound(c2, "second");
  UnionPlan<T> plan;
  plan.a = lemma7_a(c1, c2, a1, a2);
  plan.bound = aprime(plan.a);
  T d1 = c1->root().diameter();
  T d2 = c2->root().diameter();
  plan.mirrored = d1 < d2;
  const ConstructionPtr<T>& wide = plan.mirrored ? c2 : c1;
  const T& narrow_d = plan.mirrored ? d1 : d2;
  const int spine = plan.mirrored ? 0 : 1;
  ConstructionPtr<T> node = wide;
  std::size_t n = 0;
  while (true) {
    auto rem = node->remaining_depth();
    if (rem && *rem == 0) break;
    auto next = node->child(spine);
    if (next->root().diameter() < narrow_d) break;
    node = std::move(next);
    ++n;
  }
  plan.n_bar = n;
  return plan;
}

template <Scalar T>
ConstructionPtr<T> union_construct(const ConstructionPtr<T>& c1, const ConstructionPtr<T>& c2) {
  auto shared = std::make_shared<UnionShared<T>>(UnionShared<T>{c1, c2, union_plan(c1, c2)});
  ConstructionPtr<T> spine = shared->plan.mirrored ? c2 : c1;
  return std::make_shared<UnionConstruction<T>>(std::move(shared), std::move(spine), 0);
}

template <Scalar T>
ConstructionPtr<T> sum_subset_construct(const std::vector<ConstructionPtr<T>>& cs, const T& a) {
  if (cs.empty()) throw InputError("sum needs at least one set");
  if (!(T(0) < a) || !(a < T(1))) throw InputError("sum bound must satisfy 0 < a < 1");
  for (std::size_t i = 0; i < cs.size(); ++i) {
    auto b = usable_ratio_bound(cs[i], 0, false);
    if (!b || *b < a) {
      throw CertificateError("set " + std::to_string(i) + " is not ulbd with bound " + format_number(a));
    }
  }
  ConstructionPtr<T> acc = cs[0];
  T acc_bound = a;
  for (std::size_t i = 1; i < cs.size(); ++i) {
    T pair_bound = aprime(acc_bound < a ? acc_bound : a);
    acc = std::make_shared<SumConstruction<T>>(acc, cs[i], pair_bound);
    acc_bound = pair_bound;
  }
  return acc;
}

template <Scalar T>
T cabrelli_value(const T& a, std::size_t m) {
  if (!(T(0) < a)) throw InputError("Cabrelli test needs a > 0");
  if (m == 0) throw InputError("Cabrelli test needs m >= 1");
  T third = ratio<T>(1, 3);
  T b = a < third ? a : third;
  T one_minus = T(1) - b;
  return T(static_cast<long>(m - 1)) * b * b / (one_minus * one_minus * one_minus) + b / one_minus;
}

template <Scalar T>
bool cabrelli_check(const T& a, std::size_t m) {
  return !(cabrelli_value(a, m) < T(1));
}

template <Scalar T>
IntervalCertificate<T> sum_is_interval(const std::vector<ConstructionPtr<T>>& cs, const T& a, std::size_t depth) {
  if (cs.empty()) throw InputError("sum needs at least one set");
  IntervalCertificate<T> cert;
  T third = ratio<T>(1, 3);
  cert.a_used = a < third ? a : third;
  cert.m = cs.size();
  cert.condition_value = cabrelli_value(a, cs.size());
  cert.gaps_exhaustive = true;
  T lo(0);
  T hi(0);
  bool bounded = true;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    Interval<T> r = cs[i]->root();
    lo += r.lo;
    hi += r.hi;
    if (i == 0 || r.diameter() < cert.min_diameter) cert.min_diameter = r.diameter();
    auto g = max_gap(cs[i], depth);
    if (i == 0 || cert.max_gap < g.width) cert.max_gap = g.width;
    cert.gaps_exhaustive = cert.gaps_exhaustive && g.exhaustive;
    auto b = usable_ratio_bound(cs[i], depth, false);
    if (!b || *b < a) bounded = false;
  }
  if (!bounded) {
    cert.reason = "an input is not ulbd with bound " + format_number(a);
  } else if (cert.condition_value < T(1)) {
    cert.reason = "Cabrelli inequality fails: " + format_number(cert.condition_value) + " < 1";
  } else if (!cert.gaps_exhaustive) {
    cert.reason = "widest gap not certified at depth " + std::to_string(depth);
  } else if (!(cert.max_gap < cert.min_diameter)) {
    cert.reason = "a gap of width " + format_number(cert.max_gap) + " is not narrower than the smallest diameter " +
                  format_number(cert.min_diameter);
  } else {
    cert.certified = true;
    cert.interval = Interval<T>(lo, hi);
  }
  return cert;
}

template <Scalar T>
Interval<T> extend_certificate(const IntervalCertificate<T>& cert, const std::vector<ConstructionPtr<T>>& cs,
                               const std::vector<Interval<T>>& enclosures) {
  if (!cert.certified || !cert.interval) throw InputError("certificate does not certify an interval");
  if (cs.size() != enclosures.size()) throw InputError("one enclosure per set is required");
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (!(cs[i]->root() == enclosures[i])) {
      throw InputError("enclosure " + std::to_string(i) + " does not share the extremes of its set");
    }
  }
  return *cert.interval;
}

template <Scalar T>
GeometricCount<T> geometric_count_detail(const T& a1, const T& a2, const T& a) {
  if (!(T(0) < a1) || a2 < a1) throw InputError("geometric count needs 0 < A1 <= A2");
  if (!(T(0) < a) || !(a < T(1))) throw InputError("geometric count needs 0 < a < 1");
  GeometricCount<T> out;
  BigInt m = floor_big(T(a2 / a1)) + 1;
  if (!m.fits_ulong_p()) throw InputError("A2/A1 too large");
  out.m = m.get_ui();
  out.a_m = a_m(a, out.m);
  T third = ratio<T>(1, 3);
  out.b = out.a_m < third ? out.a_m : third;
  T one_minus = T(1) - out.b;
  T per = out.b * out.b / (one_minus * one_minus * one_minus);
  T need = T(1) - out.b / one_minus;
  out.h = need <= T(0) ? BigInt(0) : ceil_big(T(need / per));
  out.n = out.h * m + m;
  return out;
}

#define CANTOR_INSTANTIATE_SETOPS(T)                                                                         \
  template T aprime<T>(const T&);                                                                            \
  template T a_m<T>(const T&, std::size_t);                                                                  \
  template T lemma7_a<T>(const ConstructionPtr<T>&, const ConstructionPtr<T>&, const T&, const T&);          \
  template struct UnionPlan<T>;                                                                              \
  template UnionPlan<T> union_plan<T>(const ConstructionPtr<T>&, const ConstructionPtr<T>&);                 \
  template ConstructionPtr<T> union_construct<T>(const ConstructionPtr<T>&, const ConstructionPtr<T>&);      \
  template ConstructionPtr<T> sum_subset_construct<T>(const std::vector<ConstructionPtr<T>>&, const T&);     \
  template T cabrelli_value<T>(const T&, std::size_t);                                                       \
  template bool cabrelli_check<T>(const T&, std::size_t);                                                    \
  template IntervalCertificate<T> sum_is_interval<T>(const std::vector<ConstructionPtr<T>>&, const T&,       \
                                                     std::size_t);                                           \
  template Interval<T> extend_certificate<T>(const IntervalCertificate<T>&,                                  \
                                             const std::vector<ConstructionPtr<T>>&,                         \
                                             const std::vector<Interval<T>>&);                               \
  template GeometricCount<T> geometric_count_detail<T>(const T&, const T&, const T&);

CANTOR_INSTANTIATE_SETOPS(Rational)
CANTOR_INSTANTIATE_SETOPS(double)

}  // namespace cantor
