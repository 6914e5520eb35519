#include "doctest.h"
#include "support.hpp"

#include <cmath>

using namespace cantor;
using testing::Q;

namespace {

MapDescriptor<Rational> aff(Rational s, Rational o) { return MapDescriptor<Rational>::affine(std::move(s), std::move(o)); }

// psi(x) = s x + k x^2 on [0, 1], shifted by `shift`.
MapDescriptor<double> quad(double s, double k, double shift, double sigma, double delta, double b) {
  return MapDescriptor<double>::smooth([=](const double& x) { return shift + s * x + k * x * x; },
                                       [=](const double& x) { return s + 2 * k * x; }, sigma, delta, b,
                                       Interval<double>(0.0, 1.0));
}

Ifs<double> smooth_pair() {
  return Ifs<double>({quad(0.3, 0.05, 0.0, 0.3, 0.4, 0.1), quad(0.3, 0.05, 0.6, 0.3, 0.4, 0.1)},
                     Interval<double>(0.0, 1.0));
}

}  // namespace

TEST_CASE("compose_map") {
  auto f = testing::middle_third_ifs();
  auto g = compose_map(f, IfsWord{1, 0});  // psi_1 o psi_0
  CHECK(g.slope() == Q(1, 9));
  CHECK(g.offset() == Q(2, 3));
  auto h = compose_map(f, IfsWord{0, 1});
  CHECK(h.slope() == Q(1, 9));
  CHECK(h.offset() == Q(2, 9));
  auto id = compose_map(f, IfsWord{});
  CHECK(id(Q(5, 7)) == Q(5, 7));
}

TEST_CASE("fixed points") {
  CHECK(fixed_point(aff(Q(1, 3), Q(0))) == Q(0));
  CHECK(fixed_point(aff(Q(1, 3), Q(2, 3))) == Q(1));
  CHECK(fixed_point(aff(Q(-1, 2), Q(3, 4))) == Q(1, 2));
}

TEST_CASE("composite fixed points lie in the outer bounds") {
  auto f = testing::middle_third_ifs();
  auto b = attractor_bounds(f, 12);
  for (auto v : {IfsWord{0, 1}, IfsWord{1, 1, 0}, IfsWord{0, 1, 0, 1, 1}}) {
    auto p = fixed_point(compose_map(f, v));
    CHECK(b.outer.contains(p));
    CHECK(b.outer.contains(compose_map(f, IfsWord{1, 0})(p)));
  }
}

TEST_CASE("attractor bounds") {
  auto f = testing::middle_third_ifs();
  auto b0 = attractor_bounds(f, 0);
  CHECK(b0.outer == testing::union_of<Rational>({{Q(0), Q(1)}}));
  CHECK(b0.inner == std::vector<Rational>{Q(0), Q(1)});
  auto b1 = attractor_bounds(f, 1);
  CHECK(b1.outer == testing::union_of<Rational>({{Q(0), Q(1, 3)}, {Q(2, 3), Q(1)}}));
  for (const auto& p : b1.inner) CHECK(b1.outer.contains(p));
  CHECK(b1.inner.size() == 4);
}

TEST_CASE("inner and outer bounds converge at rate delta^n") {
  auto f = testing::ifs_of<Rational>({{Q(1, 4), Q(0)}, {Q(1, 3), Q(1, 2)}, {Q(-1, 5), Q(1)}});
  auto d = hull(f).diameter();
  for (std::size_t n : {2, 5, 8}) {
    auto b = attractor_bounds(f, n);
    auto h = hausdorff_distance(point_set(b.inner), b.outer);
    CHECK(h <= power(Q(1, 3), static_cast<int>(n)) * d);
  }
}

TEST_CASE("hull") {
  CHECK(hull(testing::middle_third_ifs()) == Interval<Rational>(Q(0), Q(1)));
  CHECK(hull(testing::symmetric_ifs()) == Interval<Rational>(Q(-1), Q(1)));
  auto neg = Ifs<Rational>({aff(Q(-1, 3), Q(0)), aff(Q(-1, 4), Q(1))});
  auto h = hull(neg);
  CHECK(hull_witness(neg).which_case == 4);
  auto deep = attractor_bounds(neg, 12).outer.hull();
  CHECK(deep.lo == h.lo);
  CHECK(deep.hi == h.hi);
}

TEST_CASE("degenerate systems are rejected") {
  CHECK_THROWS_AS(Ifs<Rational>({aff(Q(1, 2), Q(0)), aff(Q(1, 3), Q(0))}), DegenerateAttractor);
  CHECK_THROWS_AS(Ifs<Rational>({aff(Q(1, 2), Q(0))}), InputError);
  CHECK_THROWS_AS(Ifs<Rational>({aff(Q(1), Q(0)), aff(Q(1, 3), Q(1))}), InputError);
}

TEST_CASE("extreme submaps") {
  auto f = testing::ifs_of<Rational>({{Q(1, 4), Q(0)}, {Q(1, 4), Q(3, 8)}, {Q(1, 4), Q(3, 4)}});
  auto e = extreme_submaps(f);
  REQUIRE(e.size() == 2);
  CHECK(e[0].offset() == Q(0));
  CHECK(e[1].offset() == Q(3, 4));
  CHECK(hull(e) == hull(f));
  auto two = testing::middle_third_ifs();
  auto same = extreme_submaps(two);
  CHECK(same[0].offset() == two[0].offset());
  CHECK(same[1].offset() == two[1].offset());
}

TEST_CASE("ratio floor") {
  CHECK(ratio_floor(testing::middle_third_ifs()) == Q(1, 3));
  auto f = testing::ifs_of<Rational>({{Q(2, 7), Q(0)}, {Q(-1, 5), Q(1)}});
  CHECK(ratio_floor(f) == Q(1, 5));
  auto s = smooth_pair();
  double expected = 0.3 * std::exp(-0.1 / (0.3 * 0.6));
  CHECK(ratio_floor(s) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(ratio_floor(s) == doctest::Approx(0.17213).epsilon(1e-4));
}

TEST_CASE("smooth map validation") {
  // the derivative 0.3 + 0.1 x leaves [0.3, 0.35] on [0, 1]
  CHECK_THROWS_AS(validate_smooth(quad(0.3, 0.05, 0.0, 0.3, 0.35, 0.1)), InputError);
  // the second derivative 0.1 exceeds the claimed B
  CHECK_THROWS_AS(validate_smooth(quad(0.3, 0.05, 0.0, 0.3, 0.4, 0.05)), InputError);
  // the image [0.8, 1.15] leaves the domain
  CHECK_THROWS_AS(validate_smooth(quad(0.3, 0.05, 0.8, 0.3, 0.4, 0.1)), InputError);
  auto v = validate_smooth(quad(0.3, 0.05, 0.0, 0.3, 0.4, 0.1));
  CHECK(v.sampled);
  CHECK(v.min_abs_derivative >= 0.3 - 1e-12);
}

TEST_CASE("two-map constructions") {
  auto half = Ifs<Rational>({aff(Q(1, 2), Q(0)), aff(Q(1, 2), Q(1, 2))});
  auto r = two_map_construction(half);
  REQUIRE(std::holds_alternative<Interval<Rational>>(r));
  CHECK(std::get<Interval<Rational>>(r) == Interval<Rational>(Q(0), Q(1)));

  auto c = std::get<ConstructionPtr<Rational>>(two_map_construction(testing::middle_third_ifs()));
  for (std::size_t n = 0; n <= 6; ++n) CHECK(cover(c, n) == cover(middle_third(Q(0), Q(1)), n));
  CHECK(ulbd_bound(c, 8).bound == Q(1, 3));

  auto rev = Ifs<Rational>({aff(Q(-1, 3), Q(0)), aff(Q(-1, 3), Q(2, 3))});
  auto rc = std::get<ConstructionPtr<Rational>>(two_map_construction(rev));
  CHECK(cover(rc, 2) == attractor_bounds(rev, 2).outer);
}

TEST_CASE("smooth construction respects the ratio floor") {
  auto f = smooth_pair();
  auto c = std::get<ConstructionPtr<double>>(two_map_construction(f));
  auto u = ulbd_bound(c, 10);
  CHECK(u.bound >= ratio_floor(f));
}
