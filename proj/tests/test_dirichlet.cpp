#include <doctest.h>

#include <random>
#include <set>

#include "diagapprox/dirichlet.hpp"
#include "diagapprox/error.hpp"
#include "diagapprox/sampling.hpp"
#include "oracles.hpp"

using namespace diagapprox;

namespace {

Rational q(long a, long b = 1) { return make_rational(a, b); }
AdelicPoint pt(std::vector<Rational> c) { return AdelicPoint(std::move(c)); }

AdelicPoint scaled(const AdelicPoint& x, const Rational& g) {
  std::vector<Rational> c;
  for (const auto& v : x.coords()) c.push_back(g * v);
  return pt(c);
}

void check_result(const DirichletResult& r, const AdelicPoint& x, const PlaceSet& places, unsigned long N) {
  const Rational M(places.max_prime());
  CHECK(r.gamma.value() > 0);
  CHECK(level(r.gamma, places) <= N);
  const Rational d = distance(scaled(x, r.gamma.value()), diagonal(r.beta.value(), places), places);
  CHECK(d == r.distance);
  CHECK(d <= M / N);
}

}  // namespace

TEST_CASE("Z_N examples") {
  CHECK(enumerate_z_n(PlaceSet({2}), 4).size() == 17);
  CHECK(enumerate_z_n(PlaceSet({2}), 4).back().value() == 4);
  CHECK(enumerate_z_n(PlaceSet({2}), 4)[1].value() == q(1, 4));
  CHECK(enumerate_z_n(PlaceSet({2, 3}), 6).size() == 73);
  const auto one = enumerate_z_n(PlaceSet({2}), 1);
  REQUIRE(one.size() == 2);
  CHECK(one[0].is_zero());
  CHECK(one[1].value() == 1);
  CHECK_THROWS_AS(enumerate_z_n(PlaceSet({2}), 0), Error);
  const auto idx = level_ball_index(PlaceSet({2, 3}), 6);
  CHECK(idx.exponents == std::vector<unsigned long>{2, 1});
  CHECK(idx.denominator == 12);
}

TEST_CASE("Z_N matches the definition") {
  for (const auto& primes : {std::vector<unsigned long>{2}, std::vector<unsigned long>{3},
                             std::vector<unsigned long>{2, 3}, std::vector<unsigned long>{2, 5}}) {
    const PlaceSet places(primes);
    for (long N : {1L, 2L, 5L, 9L, 16L}) {
      const auto expected = oracle::level_set(primes, N);
      const auto got = enumerate_z_n(places, N);
      REQUIRE(got.size() == expected.size());
      CHECK(Integer(got.size()) == z_n_count(places, N));
      std::size_t i = 0;
      for (const auto& v : expected) CHECK(got[i++].value() == v);
    }
  }
}

TEST_CASE("pigeonhole partition") {
  for (const auto& primes : {std::vector<unsigned long>{2}, std::vector<unsigned long>{3},
                             std::vector<unsigned long>{2, 3}, std::vector<unsigned long>{2, 5}}) {
    const PlaceSet places(primes);
    for (unsigned long N = 1; N <= 64; ++N) {
      const auto part = pigeonhole_partition(places, N);
      CHECK(part.box_count < z_n_count(places, N));
      CHECK(part.diameter <= Rational(places.max_prime()) / N);
      Integer cells = part.real_cells;
      for (std::size_t i = 0; i < primes.size(); ++i) {
        Integer pe = 1;
        for (unsigned long k = 0; k < part.index.exponents[i]; ++k) pe *= primes[i];
        CHECK(pe <= N);
        CHECK(pe * primes[i] > N);
        cells *= pe;
      }
      CHECK(cells == part.box_count);
    }
  }
}

TEST_CASE("dirichlet examples") {
  const PlaceSet p2({2});
  const auto third = diagonal(q(1, 3), p2);
  const auto r = dirichlet_approximate(third, p2, 4);
  CHECK(r.distance == 0);
  check_result(r, third, p2, 4);
  for (unsigned long N : {1UL, 3UL, 10UL}) {
    const auto z = diagonal(q(0), p2);
    const auto r0 = dirichlet_approximate(z, p2, N);
    CHECK(r0.distance == 0);
    check_result(r0, z, p2, N);
  }
  const auto x = pt({q(5, 7), q(1, 7)});
  const auto r8 = dirichlet_approximate(x, p2, 8);
  check_result(r8, x, p2, 8);
  CHECK(r8.distance <= q(1, 4));
  // Brute force: the best distance over gamma in Z_8 \ {0} with beta from
  // the reduction can be no larger than what the solver found.
  Rational best = 1000;
  for (const auto& g : enumerate_z_n(p2, 8)) {
    if (g.is_zero()) continue;
    const auto gx = scaled(x, g.value());
    const auto red = reduce_to_fundamental_domain(gx, p2);
    for (const Rational& b : {red.shift.value(), Rational(red.shift.value() + 1)}) {
      best = std::min(best, distance(gx, diagonal(b, p2), p2));
    }
  }
  CHECK(best <= r8.distance);
  CHECK(best <= q(1, 4));
}

TEST_CASE("dirichlet guarantee on random points") {
  std::mt19937_64 rng(42);
  for (const auto& places : {PlaceSet({2}), PlaceSet({2, 3})}) {
    for (int s = 0; s < 20; ++s) {
      const auto x = random_rational_point(rng, places, 1000);
      for (unsigned long N : {1UL, 2UL, 4UL, 8UL, 16UL, 32UL}) check_result(dirichlet_approximate(x, places, N), x, places, N);
    }
  }
}

TEST_CASE("coprime approximants") {
  const PlaceSet p2({2});
  const auto x = pt({q(5, 7), q(1, 7)});
  const auto pairs = coprime_approximants(x, p2, 5, 1UL << 16);
  REQUIRE(pairs.size() == 5);
  std::set<std::pair<Rational, Rational>> seen;
  for (const auto& a : pairs) {
    CHECK(gcd_pz(a.beta, a.gamma) == 1);
    CHECK(a.gamma.value() > 0);
    const Rational d = distance(scaled(x, a.gamma.value()), diagonal(a.beta.value(), p2), p2);
    CHECK(d == a.distance);
    CHECK(d > 0);
    CHECK(d <= Rational(2) / level(a.gamma, p2));
    CHECK(seen.emplace(a.beta.value(), a.gamma.value()).second);
  }
  CHECK_THROWS_AS(coprime_approximants(diagonal(q(1, 3), p2), p2, 5, 1UL << 10), Error);
  try {
    coprime_approximants(diagonal(q(1, 3), p2), p2, 5, 1UL << 10);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::diagonal_rational);
  }
  try {
    coprime_approximants(x, p2, 50, 4);
    FAIL("expected exhaustion");
  } catch (const ExhaustedError& e) {
    CHECK(e.n_max() == 4);
    CHECK(e.partial().size() < 50);
  }
}
