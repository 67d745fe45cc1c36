#include <doctest.h>

#include <random>

#include "diagapprox/error.hpp"
#include "diagapprox/places.hpp"
#include "oracles.hpp"

using namespace diagapprox;

namespace {

Rational q(long a, long b = 1) { return make_rational(a, b); }

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::io;
}

}  // namespace

TEST_CASE("rational parsing and formatting") {
  CHECK(parse_rational("3/6") == q(1, 2));
  CHECK(parse_rational(" -4 ") == q(-4));
  CHECK(to_fraction_string(q(3)) == "3/1");
  CHECK(to_fraction_string(q(0)) == "0/1");
  CHECK(to_string(q(-2, 4)) == "-1/2");
  CHECK(floor(q(-1, 2)) == -1);
  CHECK(ceil(q(-1, 2)) == 0);
  CHECK(power(2, -3) == q(1, 8));
  CHECK(code_of([] { parse_rational("1/0"); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { parse_rational("x"); }) == ErrorCode::invalid_argument);
}

TEST_CASE("place sets") {
  PlaceSet p = PlaceSet::parse("inf,3,2");
  CHECK(p.primes() == std::vector<unsigned long>{2, 3});
  CHECK(p.r() == 2);
  CHECK(p.max_prime() == 3);
  CHECK(p.prime_product() == 6);
  CHECK(p.to_string() == "{inf,2,3}");
  CHECK(code_of([] { PlaceSet({4}); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { PlaceSet({2, 2}); }) == ErrorCode::invalid_argument);
  CHECK(code_of([] { PlaceSet({}); }) == ErrorCode::invalid_argument);
}

TEST_CASE("valuations and absolute values") {
  CHECK(padic_valuation(q(12), 2) == 2);
  CHECK(padic_valuation(q(1), 7) == 0);
  CHECK(padic_valuation(q(5, 27), 3) == -3);
  CHECK(padic_abs(q(12), 2) == q(1, 4));
  CHECK(padic_abs(q(0), 3) == 0);
  CHECK(padic_abs(q(5, 27), 3) == 27);
  CHECK(code_of([] { padic_valuation(q(0), 2); }) == ErrorCode::invalid_argument);
  CHECK(euler_phi(1) == 1);
  CHECK(euler_phi(36) == 12);
}

TEST_CASE("decomposition") {
  const PlaceSet p23({2, 3});
  auto g = decompose(q(20, 9), p23);
  CHECK(g.sign() == 1);
  CHECK(g.unit() == 5);
  CHECK(g.exponents() == std::vector<long>{2, -2});
  auto one = decompose(q(1), PlaceSet({2}));
  CHECK(one.unit() == 1);
  CHECK(one.exponents() == std::vector<long>{0});
  CHECK(code_of([] { decompose(q(1, 7), PlaceSet({2})); }) == ErrorCode::not_in_localization);
  CHECK(decompose(q(0), p23).is_zero());
  CHECK(decompose(q(-3, 4), p23).sign() == -1);
}

TEST_CASE("level, L and gcd") {
  const PlaceSet p2({2}), p23({2, 3});
  CHECK(level(decompose(q(5, 2), p23), p23) == q(5, 2));
  CHECK(level(decompose(q(1), p2), p2) == 1);
  CHECK(level(decompose(q(12), p2), p2) == 12);
  CHECK(level(PZElement::zero(p2), p2) == 0);
  CHECK(big_L(decompose(q(12), p2), p2) == 12);
  CHECK(big_L(decompose(q(1), p2), p2) == 1);
  CHECK(big_L(decompose(q(5, 2), p23), p23) == 5);
  CHECK(code_of([&] { big_L(PZElement::zero(p2), p2); }) == ErrorCode::invalid_argument);
  CHECK(gcd_pz(decompose(q(6), p2), decompose(q(9), p2)) == 3);
  CHECK(gcd_pz(decompose(q(4), p2), decompose(q(8), p2)) == 1);
  CHECK(gcd_pz(decompose(q(1), p2), decompose(q(45, 8), p2)) == 1);
  CHECK(gcd_pz(PZElement::zero(p2), decompose(q(5), p2)) == 5);
  CHECK(code_of([&] { gcd_pz(PZElement::zero(p2), PZElement::zero(p2)); }) == ErrorCode::invalid_argument);
}

TEST_CASE("place invariants against the oracle over level <= 16") {
  for (const auto& primes : {std::vector<unsigned long>{2}, std::vector<unsigned long>{3},
                             std::vector<unsigned long>{2, 3}}) {
    const PlaceSet places(primes);
    for (const auto& value : oracle::level_set(primes, 16)) {
      if (value == 0) continue;
      const auto g = decompose(value, places);
      // Product formula restricted to P.
      Rational prod = abs_infinite(g, places);
      for (std::size_t i = 0; i < places.r(); ++i) prod *= abs_finite(g, places, i);
      CHECK(prod == Rational(g.unit()));
      CHECK(g.unit() == oracle::unit(value, primes));
      CHECK(level(g, places) == oracle::level(value, primes));
      CHECK(big_L(g, places) == oracle::big_L(value, primes));
      CHECK(big_L(g, places) >= 1);
      // Recomposition.
      CHECK(PZElement(g.sign(), g.unit(), g.exponents(), places).value() == value);
    }
  }
}

TEST_CASE("ultrametric inequality and submultiplicative level") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> num(-500, 500), den(1, 64);
  const PlaceSet p23({2, 3});
  for (int s = 0; s < 2000; ++s) {
    const Rational a = make_rational(num(rng), den(rng));
    const Rational b = make_rational(num(rng), den(rng));
    for (unsigned long p : {2UL, 3UL, 5UL}) {
      const Rational sa = padic_abs(a, p), sb = padic_abs(b, p), sab = padic_abs(a + b, p);
      CHECK(sab <= std::max(sa, sb));
      if (sa != sb) CHECK(sab == std::max(sa, sb));
    }
  }
  std::uniform_int_distribution<long> pick(1, 96);
  for (int s = 0; s < 500; ++s) {
    const Rational a = make_rational(pick(rng), 1L << (s % 4)) * (s % 3 == 0 ? 3 : 1);
    const Rational b = make_rational(pick(rng), s % 5 == 0 ? 9 : 2);
    const auto ga = decompose(a, p23), gb = decompose(b, p23), gab = decompose(a * b, p23);
    CHECK(level(gab, p23) <= level(ga, p23) * level(gb, p23));
  }
}
