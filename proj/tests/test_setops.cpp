#include "doctest.h"
#include "support.hpp"

using namespace cantor;
using testing::Q;

namespace {

ConstructionPtr<Rational> mt(long long lo = 0, long long hi = 1) { return middle_third(Q(lo), Q(hi)); }

}  // namespace

TEST_CASE("aprime and a_m") {
  CHECK(aprime(Q(1, 3)) == Q(1, 12));
  CHECK(aprime(Q(1)) == Q(1, 2));
  CHECK(aprime(Q(1, 12)) == Q(1, 156));
  CHECK(a_m(Q(1, 3), 1) == Q(1, 3));
  CHECK(a_m(Q(1, 3), 2) == Q(1, 12));
  CHECK(a_m(Q(1, 3), 3) == Q(1, 156));
  CHECK(a_m(Q(2, 7), 1) == Q(2, 7));
}

TEST_CASE("lemma7_a") {
  CHECK(lemma7_a(mt(0, 1), mt(2, 3), Q(1, 3), Q(1, 3)) == Q(1, 3));
  // nearly touching hulls give quotients near 1, so the input bounds decide
  CHECK(lemma7_a(mt(0, 1), translate(mt(0, 1), Q(1001, 1000)), Q(1, 3), Q(1, 4)) == Q(1, 4));
  // a far second set makes the first quotient tiny
  CHECK(lemma7_a(mt(0, 1), mt(100, 101), Q(1, 3), Q(1, 3)) == Q(1, 100));
  CHECK_THROWS_AS(lemma7_a(mt(0, 1), middle_third(Q(1, 2), Q(3, 2)), Q(1, 3), Q(1, 3)), OverlapError);
}

TEST_CASE("union of separated middle-thirds") {
  auto c1 = mt(0, 1), c2 = mt(2, 3);
  auto u = union_construct(c1, c2);
  auto plan = union_plan(c1, c2);
  CHECK(u->root() == Interval<Rational>(Q(0), Q(3)));
  CHECK(plan.bound == Q(1, 12));
  CHECK(ulbd_bound(u, 10).bound >= Q(1, 12));
  CHECK_NOTHROW(verify_construction(u, 10));
  const std::size_t nb = plan.n_bar;
  for (std::size_t n = nb + 1; n <= nb + 6; ++n) {
    auto merged = IntervalUnion<Rational>::from_pieces([&] {
      auto v = cover(c1, n).intervals();
      auto w = cover(c2, n).intervals();
      v.insert(v.end(), w.begin(), w.end());
      return v;
    }());
    auto coarse = IntervalUnion<Rational>::from_pieces([&] {
      auto v = cover(c1, n - nb - 1).intervals();
      auto w = cover(c2, n - nb - 1).intervals();
      v.insert(v.end(), w.begin(), w.end());
      return v;
    }());
    auto cn = cover(u, n);
    CHECK(merged.subset_of(cn));
    CHECK(cn.subset_of(coarse));
  }
}

TEST_CASE("union classification") {
  auto plan = union_plan(mt(0, 1), mt(2, 3));
  CHECK_FALSE(plan.mirrored);
  CHECK(plan.n_bar == 0);
  CHECK(plan.classify(BinaryWord()) == UnionCase::first);
  auto wide = union_plan(mt(0, 1), middle_third(Q(2), Q(11)));
  CHECK(wide.mirrored);
  CHECK(wide.n_bar == 2);
}

TEST_CASE("union rejects overlap and unbounded inputs") {
  CHECK_THROWS_AS(union_construct(mt(0, 1), middle_third(Q(1, 2), Q(3, 2))), OverlapError);
}

TEST_CASE("sum subset construction") {
  auto c = mt();
  auto s = sum_subset_construct<Rational>({c, c}, Q(1, 3));
  CHECK(s->root() == Interval<Rational>(Q(0), Q(2)));
  CHECK(max_gap(s, 8).width <= Q(1, 3));
  CHECK(ulbd_bound(s, 8).bound >= Q(1, 12));
  CHECK_NOTHROW(verify_construction(s, 8));
  auto one = sum_subset_construct<Rational>({c}, Q(1, 3));
  CHECK(one == c);
  auto three = sum_subset_construct<Rational>({c, mt(2, 3), middle_third(Q(-1), Q(0))}, Q(1, 3));
  CHECK(three->root() == Interval<Rational>(Q(1), Q(4)));
  CHECK_THROWS_AS(sum_subset_construct<Rational>({c, c}, Q(1, 2)), CertificateError);
}

TEST_CASE("cabrelli") {
  CHECK(cabrelli_value(Q(1, 3), 3) == Q(5, 4));
  CHECK(cabrelli_check(Q(1, 3), 3));
  CHECK(cabrelli_value(Q(1, 3), 2) == Q(7, 8));
  CHECK_FALSE(cabrelli_check(Q(1, 3), 2));
  CHECK_FALSE(cabrelli_check(Q(1, 10), 1));
  CHECK_FALSE(cabrelli_check(Q(2, 5), 1));
}

TEST_CASE("sum_is_interval") {
  auto c = mt();
  auto three = sum_is_interval<Rational>({c, c, c}, Q(1, 3));
  CHECK(three.certified);
  CHECK(three.condition_value == Q(5, 4));
  REQUIRE(three.interval);
  CHECK(*three.interval == Interval<Rational>(Q(0), Q(3)));

  auto two = sum_is_interval<Rational>({c, c}, Q(1, 3));
  CHECK_FALSE(two.certified);
  CHECK(two.condition_value == Q(7, 8));

  auto single = sum_is_interval<Rational>({c}, Q(1, 3));
  CHECK_FALSE(single.certified);
}

TEST_CASE("certificate extension") {
  auto c = mt();
  auto cert = sum_is_interval<Rational>({c, c, c}, Q(1, 3));
  Interval<Rational> unit(Q(0), Q(1));
  CHECK(extend_certificate(cert, {c, c, c}, {unit, unit, unit}) == Interval<Rational>(Q(0), Q(3)));
  CHECK_THROWS_AS(extend_certificate(cert, {c, c, c}, {unit, unit, Interval<Rational>(Q(0), Q(2))}), InputError);
}

TEST_CASE("geometric count") {
  auto d = geometric_count_detail(Q(1), Q(1), Q(1, 3));
  CHECK(d.m == 2);
  CHECK(d.a_m == Q(1, 12));
  CHECK(d.h == 101);
  CHECK(d.n == 204);
  CHECK(geometric_count(Q(1), Q(3, 2), Q(1, 3)) == 204);
  CHECK(geometric_count(Q(1), Q(1), Q(1, 3)) <= geometric_count(Q(1), Q(1), Q(1, 4)));
  CHECK(geometric_count(Q(1), Q(1), Q(1, 4)) == 652);
  CHECK(geometric_count_detail(Q(1), Q(2), Q(1, 3)).m == 3);
}
