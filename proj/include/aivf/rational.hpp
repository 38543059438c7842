#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace aivf {

// Exact rational number. mpq_class keeps values canonical (lowest terms,
// positive denominator) after every arithmetic operation.
using Rational = mpq_class;
using Integer = mpz_class;

using RationalVector = std::vector<Rational>;
using RationalMatrix = std::vector<RationalVector>;

/// Parses `n/d`, an integer, or a decimal literal such as `0.6` or `-1.25e-3`
/// into an exact rational. Throws Error(Parse) on malformed text or a zero
/// denominator.
Rational parse_rational(std::string_view text);

/// Canonical `num/den` text; integers are printed as `num/1` so that every
/// serialized probability has the same shape.
std::string to_fraction_string(const Rational& r);

/// Decimal rendering with `digits` places after the point, correctly rounded
/// (ties away from zero).
std::string to_decimal_string(const Rational& r, int digits = 12);

/// Number of bits of |z| (0 for z == 0).
std::size_t bit_length(const Integer& z);

/// Bits of the larger of numerator and denominator.
std::size_t bit_size(const Rational& r);

}  // namespace aivf
