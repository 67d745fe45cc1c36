#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace diagapprox {

// Arbitrary-precision integers and rationals. mpq_class keeps values in
// lowest terms with a positive denominator once canonicalized; every
// constructor below canonicalizes.
using Integer = mpz_class;
using Rational = mpq_class;

Rational make_rational(const Integer& num, const Integer& den);

// Accepts "a", "-a", "a/b" with optional surrounding whitespace.
Rational parse_rational(std::string_view text);
Integer parse_integer(std::string_view text);

// "num/den", or just "num" when the denominator is 1.
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

// Always "num/den", including "0/1" and "3/1". Used by the report writers.
std::string to_fraction_string(const Rational& q);

Integer floor(const Rational& q);
Integer ceil(const Rational& q);

// base^exponent for a possibly negative exponent.
Rational power(unsigned long base, long exponent);
Integer ipower(unsigned long base, unsigned long exponent);

}  // namespace diagapprox
