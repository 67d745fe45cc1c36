#include <doctest.h>

#include <random>

#include "diagapprox/error.hpp"
#include "diagapprox/geometry.hpp"
#include "oracles.hpp"

using namespace diagapprox;

namespace {

Rational q(long a, long b = 1) { return make_rational(a, b); }
AdelicPoint pt(std::vector<Rational> c) { return AdelicPoint(std::move(c)); }

// Fraction of the residues mod p^K lying in the ball, with K deep enough
// that the ball is a union of residue classes.
Rational residue_fraction(unsigned long p, const std::vector<PadicBall>& balls, unsigned K) {
  long modulus = 1;
  for (unsigned k = 0; k < K; ++k) modulus *= static_cast<long>(p);
  long hits = 0;
  for (long x = 0; x < modulus; ++x) {
    bool all = true;
    for (const auto& b : balls) all = all && oracle::abs_p(Rational(x) - b.center, p) < b.radius;
    hits += all;
  }
  return make_rational(hits, modulus);
}

}  // namespace

TEST_CASE("distance examples") {
  const PlaceSet p2({2}), p3({3});
  CHECK(distance(pt({q(1, 2), q(1, 2)}), pt({q(1, 3), q(1, 3)}), p2) == 2);
  CHECK(distance(pt({q(1, 5), q(7)}), pt({q(1, 5), q(7)}), p2) == 0);
  CHECK(distance(pt({q(0), q(1)}), pt({q(0), q(0)}), p3) == 1);
  CHECK_THROWS_AS(distance(pt({q(0)}), pt({q(0), q(0)}), p3), Error);
}

TEST_CASE("distance is a metric") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> num(-60, 60), den(1, 24);
  const PlaceSet p23({2, 3});
  const oracle::Primes primes{2, 3};
  auto random_point = [&] {
    std::vector<Rational> c;
    for (int k = 0; k < 3; ++k) c.push_back(make_rational(num(rng), den(rng)));
    return pt(c);
  };
  for (int s = 0; s < 500; ++s) {
    const auto x = random_point(), y = random_point(), z = random_point();
    const Rational dxy = distance(x, y, p23);
    CHECK(dxy == oracle::dist(x.coords(), y.coords(), primes));
    CHECK(dxy == distance(y, x, p23));
    CHECK(distance(x, z, p23) <= dxy + distance(y, z, p23));
    CHECK((dxy == 0) == (x == y));
  }
}

TEST_CASE("fundamental domain points") {
  const PlaceSet p2({2});
  CHECK(FundamentalDomainPoint::contains(pt({q(0), q(3)}), p2));
  CHECK_FALSE(FundamentalDomainPoint::contains(pt({q(1), q(3)}), p2));
  CHECK_FALSE(FundamentalDomainPoint::contains(pt({q(1, 2), q(1, 2)}), p2));
  CHECK(FundamentalDomainPoint::contains(pt({q(1, 2), q(1, 3)}), p2));
  CHECK_THROWS_AS(FundamentalDomainPoint(pt({q(-1, 2), q(0)}), p2), Error);
}

TEST_CASE("reduction examples") {
  const PlaceSet p2({2});
  auto r = reduce_to_fundamental_domain(diagonal(q(3, 2), p2), p2);
  CHECK(r.point.point() == pt({q(0), q(0)}));
  CHECK(r.shift.value() == q(3, 2));
  auto same = reduce_to_fundamental_domain(pt({q(2, 5), q(7, 3)}), p2);
  CHECK(same.point.point() == pt({q(2, 5), q(7, 3)}));
  CHECK(same.shift.is_zero());
  auto r2 = reduce_to_fundamental_domain(pt({q(7, 4), q(1, 3)}), p2);
  CHECK(r2.point.point() == pt({q(3, 4), q(-2, 3)}));
  CHECK(r2.shift.value() == 1);
  CHECK(principal_part(q(3, 8), 2) == q(3, 8));
  CHECK(principal_part(q(5, 6), 2) == q(1, 2));
  CHECK(padic_residue(q(1, 3), 2, 3) == 3);  // 3 * 3 = 9 = 1 mod 8
}

TEST_CASE("reduction is idempotent and lattice invariant") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> num(-999, 999), den(1, 999), shift_num(-50, 50), shift_exp(0, 4);
  const PlaceSet p23({2, 3});
  for (int s = 0; s < 300; ++s) {
    std::vector<Rational> c;
    for (int k = 0; k < 3; ++k) c.push_back(make_rational(num(rng), den(rng)));
    const auto x = pt(c);
    const auto r = reduce_to_fundamental_domain(x, p23);
    CHECK(FundamentalDomainPoint::contains(r.point.point(), p23));
    CHECK(translate(r.point.point(), r.shift.value()) == x);
    CHECK(reduce_to_fundamental_domain(r.point.point(), p23).shift.is_zero());
    const Rational eta = make_rational(shift_num(rng), (1L << shift_exp(rng)) * (s % 2 ? 3 : 1));
    CHECK(reduce_to_fundamental_domain(translate(x, eta), p23).point == r.point);
  }
}

TEST_CASE("ball measure") {
  CHECK(ball_measure({2, q(0), q(3, 4), Openness::strict}) == q(1, 2));
  CHECK(ball_measure({3, q(0), q(1, 9), Openness::strict}) == q(1, 27));
  CHECK(ball_measure({3, q(0), q(1, 9), Openness::weak}) == q(1, 9));
  CHECK(ball_measure({5, q(0), q(7), Openness::strict}) == 5);
  CHECK_THROWS_AS(ball_measure({2, q(0), q(0), Openness::strict}), Error);
  // The measure brackets the radius; at powers of p the strict ball loses a
  // factor p, so the lower end is reached.
  for (unsigned long p : {2UL, 3UL, 5UL}) {
    for (long a = 1; a <= 40; ++a) {
      for (long b : {1L, 7L, 16L, 27L, 125L}) {
        const Rational rho = make_rational(a, b);
        const Rational s = ball_measure({p, q(0), rho, Openness::strict});
        const Rational w = ball_measure({p, q(0), rho, Openness::weak});
        CHECK(s < rho);
        CHECK(s >= rho / p);
        CHECK(w <= rho);
        CHECK(w > rho / p);
        // Power of p, checked on the p-adic valuation of the measure itself.
        CHECK(oracle::abs_p(s, p) == 1 / s);
      }
    }
    const Rational pk = power(p, -2);
    CHECK(ball_measure({p, q(0), pk, Openness::strict}) == pk / p);
  }
}

TEST_CASE("ball intersections against residue counting") {
  for (unsigned long p : {2UL, 3UL}) {
    const unsigned K = p == 2 ? 7 : 5;
    for (long c1 = 0; c1 < 9; ++c1) {
      for (long c2 = 0; c2 < 9; ++c2) {
        for (const Rational& r1 : {q(1), q(1, 2), q(1, 3), q(2, 9), q(1, 8)}) {
          for (const Rational& r2 : {q(1), q(1, 4), q(1, 9), q(1, 5)}) {
            const PadicBall a{p, q(c1, 5), r1, Openness::strict};
            const PadicBall b{p, q(c2, 7), r2, Openness::strict};
            const Rational m = ball_intersection_measure(a, b);
            CHECK(m == residue_fraction(p, {a, b}, K));
            CHECK((m == 0 || m == std::min(ball_measure(a), ball_measure(b))));
          }
        }
      }
    }
    CHECK(ball_measure({p, q(1, 5), q(1, 3), Openness::strict}) == residue_fraction(p, {{p, q(1, 5), q(1, 3)}}, K));
  }
}

TEST_CASE("box measure examples") {
  const PlaceSet p2({2}), p23({2, 3});
  CHECK(box_measure(make_box(q(1, 3), q(1, 18), {q(1, 6)}, p2)) == q(1, 72));
  CHECK(box_measure(make_box(q(1, 3), q(3, 4), {q(1, 6)}, p2)) == q(1, 8));
  CHECK(box_measure(make_box(q(1, 2), q(1, 4), {q(1), q(1)}, p23)) == q(1, 12));
}

TEST_CASE("box intersection examples") {
  const PlaceSet p2({2});
  const auto b = make_box(q(1, 3), q(1, 18), {q(1, 6)}, p2);
  CHECK(box_intersection_measure(b, b) == box_measure(b));
  ApproxBox b0{q(1, 2), q(1, 8), {{2, q(0), q(1, 4), Openness::strict}}, Openness::strict};
  ApproxBox b1{q(1, 2), q(1, 8), {{2, q(1), q(1, 4), Openness::strict}}, Openness::strict};
  CHECK(box_intersection_measure(b0, b1) == 0);
  // Real intervals (-1/8, 1/8) and (1/16, 5/16) over the same p-adic ball.
  ApproxBox c0{q(0), q(1, 8), {{2, q(0), q(1, 2), Openness::strict}}, Openness::strict};
  ApproxBox c1{q(3, 16), q(1, 8), {{2, q(0), q(1, 2), Openness::strict}}, Openness::strict};
  CHECK(box_intersection_measure(c0, c1) == q(1, 16) * q(1, 4));
  CHECK(box_intersection_measure(c0, c1) <= std::min(box_measure(c0), box_measure(c1)));
  ApproxBox wide{q(0), q(3, 4), {{2, q(0), q(1, 2), Openness::strict}}, Openness::strict};
  CHECK_THROWS_AS(box_intersection_measure(wide, c0), Error);
}

TEST_CASE("boxes leave [0, 1) through a diagonal shift") {
  const PlaceSet p2({2});
  // Around 1 with real radius 1/4: the part above 1 returns as real
  // coordinates near 0 together with 2-adic coordinates near 0.
  const auto b = make_box(q(1), q(1, 4), {q(1, 2)}, p2);
  CHECK(box_contains(b, pt({q(9, 10), q(1)})));
  CHECK(box_contains(b, pt({q(1, 10), q(0)})));
  CHECK_FALSE(box_contains(b, pt({q(1, 10), q(1)})));
  CHECK_FALSE(box_contains(b, pt({q(9, 10), q(0)})));
  // The same box centred at 0 has the same image.
  const auto b0 = make_box(q(0), q(1, 4), {q(1, 2)}, p2);
  CHECK(box_intersection_measure(b, b0) == box_measure(b));
  // Near real 0 the box meets 2-adic coordinates near 0, not near 1.
  ApproxBox near0{q(1, 16), q(1, 32), {{2, q(0), q(1, 2), Openness::strict}}, Openness::strict};
  ApproxBox near1{q(1, 16), q(1, 32), {{2, q(1), q(1, 2), Openness::strict}}, Openness::strict};
  CHECK(box_intersection_measure(b, near0) == q(1, 16) * q(1, 4));
  CHECK(box_intersection_measure(b, near1) == 0);
}

TEST_CASE("box membership") {
  const PlaceSet p2({2});
  const auto b = make_box(q(1, 3), q(1, 18), {q(1, 6)}, p2);
  CHECK(box_contains(b, pt({q(1, 3), q(1, 3)})));
  CHECK_FALSE(box_contains(b, pt({q(1, 3) + q(1, 18), q(1, 3)})));
  CHECK(box_contains(make_box(q(1, 3), q(1, 18), {q(1, 6)}, p2, Openness::weak), pt({q(1, 3) + q(1, 18), q(1, 3)})));
  CHECK(box_contains(b, pt({q(1, 3), q(1, 3) + 8})));
  CHECK_FALSE(box_contains(b, pt({q(1, 3), q(1, 3) + 4})));
}
