#ifndef KRSPEC_RATIONAL_HPP
#define KRSPEC_RATIONAL_HPP

#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

namespace krs {

/// Exact rational numbers. Filtration values, measures and weights are all
/// stored exactly so that threshold comparisons never see binary rounding.
using Rational = boost::multiprecision::mpq_rational;

/// Parse "-12", "0.25", "1.5e-3" or "3/7" exactly. Throws std::invalid_argument
/// on anything else (including nan/inf).
Rational parse_rational(std::string_view text);

/// Exact decimal expansion when the denominator divides a power of ten,
/// otherwise "p/q". Trailing zeros are dropped; integers print without a
/// decimal point.
std::string to_string(const Rational& value);

double to_double(const Rational& value);

/// Nearest decimal with `digits` fractional digits (round half away from zero).
Rational round_decimal(double value, int digits);

}  // namespace krs

#endif  // KRSPEC_RATIONAL_HPP
