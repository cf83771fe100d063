#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace boxlab {

using Rational = mpq_class;

/// Parses "p/q" or an integer string. Throws StructuralError on bad input or
/// a zero denominator. The result is canonicalized.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form, or "p" when the denominator is 1.
std::string to_string(const Rational& q);

Rational ipow(const Rational& base, unsigned long exponent);

Rational abs(const Rational& q);

/// Decimal rendering with the given number of significant digits.
std::string to_decimal(double value, int significant_digits = 12);

/// Approximate 2^d-th root of a non-negative rational.
double root_of_power(const Rational& pow, unsigned d);

}  // namespace boxlab
