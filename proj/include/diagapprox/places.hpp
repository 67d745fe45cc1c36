#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

#include "diagapprox/rational.hpp"

namespace diagapprox {

bool is_prime(unsigned long n);

// Euler's totient by trial-division factorization.
Integer euler_phi(const Integer& n);

/// The finite set of places {inf, p_1, ..., p_r}. Primes are stored sorted
/// ascending and are checked for primality and distinctness on construction.
class PlaceSet {
 public:
  explicit PlaceSet(std::vector<unsigned long> primes);

  /// Parses "2,3" or "inf,2,3".
  static PlaceSet parse(std::string_view text);

  std::size_t r() const noexcept { return primes_.size(); }
  /// Number of places including the infinite one.
  std::size_t size() const noexcept { return primes_.size() + 1; }
  const std::vector<unsigned long>& primes() const noexcept { return primes_; }
  unsigned long prime(std::size_t i) const { return primes_.at(i); }
  /// M, the largest finite prime.
  unsigned long max_prime() const noexcept { return primes_.back(); }
  /// The product p_1 * ... * p_r.
  const Integer& prime_product() const noexcept { return product_; }

  std::string to_string() const;

  bool operator==(const PlaceSet& other) const noexcept { return primes_ == other.primes_; }

 private:
  std::vector<unsigned long> primes_;
  Integer product_;
};

long padic_valuation(const Integer& z, unsigned long p);
long padic_valuation(const Rational& q, unsigned long p);

/// p^{-v_p(q)}, with |0|_p = 0.
Rational padic_abs(const Rational& q, unsigned long p);

/// An element of P^{-1}Z in the form sign * n * p_1^{nu_1} ... p_r^{nu_r}
/// with n coprime to every p_i. Zero has sign 0, unit 0 and all exponents 0.
class PZElement {
 public:
  PZElement() = default;
  PZElement(int sign, Integer unit, std::vector<long> exponents, const PlaceSet& places);

  static PZElement zero(const PlaceSet& places);

  int sign() const noexcept { return sign_; }
  bool is_zero() const noexcept { return sign_ == 0; }
  bool is_positive() const noexcept { return sign_ > 0; }
  const Integer& unit() const noexcept { return unit_; }
  const std::vector<long>& exponents() const noexcept { return exponents_; }
  long exponent(std::size_t i) const { return exponents_.at(i); }
  const Rational& value() const noexcept { return value_; }

  bool operator==(const PZElement& other) const { return value_ == other.value_; }
  std::strong_ordering operator<=>(const PZElement& other) const {
    int c = cmp(value_, other.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  int sign_ = 0;
  Integer unit_ = 0;
  std::vector<long> exponents_;
  Rational value_ = 0;
};

/// Throws NotInLocalization when the denominator has a prime outside P.
PZElement decompose(const Rational& q, const PlaceSet& places);

/// |gamma|_inf = n * prod p_i^{nu_i}.
Rational abs_infinite(const PZElement& gamma, const PlaceSet& places);
/// |gamma|_{p_i} = p_i^{-nu_i}; index i counts finite places from 0.
Rational abs_finite(const PZElement& gamma, const PlaceSet& places, std::size_t i);

/// Level: max over all places of |gamma|_p; 0 for gamma = 0.
Rational level(const PZElement& gamma, const PlaceSet& places);

/// max over places of n / |gamma|_p. Requires gamma != 0.
Rational big_L(const PZElement& gamma, const PlaceSet& places);

/// gcd of the unit parts, with gcd(0, gamma) = n(gamma).
Integer gcd_pz(const PZElement& beta, const PZElement& gamma);

std::string to_string(const PZElement& gamma);

}  // namespace diagapprox
