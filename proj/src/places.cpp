#include "diagapprox/places.hpp"

#include <algorithm>
#include <sstream>

#include "diagapprox/error.hpp"

namespace diagapprox {

bool is_prime(unsigned long n) {
  if (n < 2) return false;
  for (unsigned long d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

Integer euler_phi(const Integer& n) {
  if (n < 1) fail(ErrorCode::invalid_argument, "euler_phi requires n >= 1");
  Integer rest = n;
  Integer result = n;
  for (Integer d = 2; d * d <= rest; ++d) {
    if (mpz_divisible_p(rest.get_mpz_t(), d.get_mpz_t())) {
      while (mpz_divisible_p(rest.get_mpz_t(), d.get_mpz_t())) rest /= d;
      result -= result / d;
    }
  }
  if (rest > 1) result -= result / rest;
  return result;
}

PlaceSet::PlaceSet(std::vector<unsigned long> primes) : primes_(std::move(primes)), product_(1) {
  if (primes_.empty()) fail(ErrorCode::invalid_argument, "a place set needs at least one finite prime");
  std::sort(primes_.begin(), primes_.end());
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    if (!is_prime(primes_[i])) {
      fail(ErrorCode::invalid_argument, std::to_string(primes_[i]) + " is not prime");
    }
    if (i > 0 && primes_[i] == primes_[i - 1]) {
      fail(ErrorCode::invalid_argument, "duplicate prime " + std::to_string(primes_[i]));
    }
    product_ *= primes_[i];
  }
}

PlaceSet PlaceSet::parse(std::string_view text) {
  std::vector<unsigned long> primes;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) {
    auto b = item.find_first_not_of(" \t{}");
    auto e = item.find_last_not_of(" \t{}");
    if (b == std::string::npos) continue;
    item = item.substr(b, e - b + 1);
    if (item == "inf" || item == "oo" || item == "∞") continue;
    Integer p = parse_integer(item);
    if (p < 2 || !p.fits_ulong_p()) fail(ErrorCode::invalid_argument, "bad prime '" + item + "'");
    primes.push_back(p.get_ui());
  }
  return PlaceSet(std::move(primes));
}

std::string PlaceSet::to_string() const {
  std::string out = "{inf";
  for (auto p : primes_) out += "," + std::to_string(p);
  return out + "}";
}

long padic_valuation(const Integer& z, unsigned long p) {
  if (z == 0) fail(ErrorCode::invalid_argument, "valuation of zero is infinite");
  Integer rest = z;
  long v = 0;
  while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
    mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
    ++v;
  }
  return v;
}

long padic_valuation(const Rational& q, unsigned long p) {
  if (q == 0) fail(ErrorCode::invalid_argument, "valuation of zero is infinite");
  return padic_valuation(q.get_num(), p) - padic_valuation(q.get_den(), p);
}

Rational padic_abs(const Rational& q, unsigned long p) {
  if (q == 0) return 0;
  return power(p, -padic_valuation(q, p));
}

PZElement::PZElement(int sign, Integer unit, std::vector<long> exponents, const PlaceSet& places)
    : sign_(sign), unit_(std::move(unit)), exponents_(std::move(exponents)) {
  if (exponents_.size() != places.r()) fail(ErrorCode::invalid_argument, "exponent count differs from r");
  if (sign_ == 0) {
    unit_ = 0;
    std::fill(exponents_.begin(), exponents_.end(), 0);
    value_ = 0;
    return;
  }
  if (sign_ != 1 && sign_ != -1) fail(ErrorCode::invalid_argument, "sign must be -1, 0 or 1");
  if (unit_ < 1) fail(ErrorCode::invalid_argument, "unit part must be positive");
  Rational v = unit_;
  for (std::size_t i = 0; i < places.r(); ++i) {
    if (mpz_divisible_ui_p(unit_.get_mpz_t(), places.prime(i))) {
      fail(ErrorCode::invalid_argument, "unit part divisible by " + std::to_string(places.prime(i)));
    }
    v *= power(places.prime(i), exponents_[i]);
  }
  value_ = sign_ < 0 ? Rational(-v) : v;
}

PZElement PZElement::zero(const PlaceSet& places) {
  return PZElement(0, 0, std::vector<long>(places.r(), 0), places);
}

PZElement decompose(const Rational& q, const PlaceSet& places) {
  if (q == 0) return PZElement::zero(places);
  Integer num = abs(q.get_num());
  Integer den = q.get_den();
  std::vector<long> nu(places.r(), 0);
  for (std::size_t i = 0; i < places.r(); ++i) {
    const unsigned long p = places.prime(i);
    while (mpz_divisible_ui_p(num.get_mpz_t(), p)) {
      mpz_divexact_ui(num.get_mpz_t(), num.get_mpz_t(), p);
      ++nu[i];
    }
    while (mpz_divisible_ui_p(den.get_mpz_t(), p)) {
      mpz_divexact_ui(den.get_mpz_t(), den.get_mpz_t(), p);
      --nu[i];
    }
  }
  if (den != 1) {
    fail(ErrorCode::not_in_localization,
         to_string(q) + " has a denominator prime outside " + places.to_string());
  }
  return PZElement(sgn(q), num, std::move(nu), places);
}

Rational abs_infinite(const PZElement& gamma, const PlaceSet&) { return abs(gamma.value()); }

Rational abs_finite(const PZElement& gamma, const PlaceSet& places, std::size_t i) {
  if (gamma.is_zero()) return 0;
  return power(places.prime(i), -gamma.exponent(i));
}

Rational level(const PZElement& gamma, const PlaceSet& places) {
  if (gamma.is_zero()) return 0;
  Rational best = abs_infinite(gamma, places);
  for (std::size_t i = 0; i < places.r(); ++i) best = std::max(best, abs_finite(gamma, places, i));
  return best;
}

Rational big_L(const PZElement& gamma, const PlaceSet& places) {
  if (gamma.is_zero()) fail(ErrorCode::invalid_argument, "L(0) is undefined");
  Rational best = gamma.unit() / abs_infinite(gamma, places);
  for (std::size_t i = 0; i < places.r(); ++i) {
    best = std::max(best, Rational(gamma.unit() / abs_finite(gamma, places, i)));
  }
  return best;
}

Integer gcd_pz(const PZElement& beta, const PZElement& gamma) {
  if (beta.is_zero() && gamma.is_zero()) fail(ErrorCode::invalid_argument, "gcd(0, 0) is undefined");
  return gcd(beta.unit(), gamma.unit());
}

std::string to_string(const PZElement& gamma) { return to_string(gamma.value()); }

}  // namespace diagapprox
