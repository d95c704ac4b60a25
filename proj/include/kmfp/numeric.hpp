#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

namespace kmfp {

using BigInt = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

/// Parses "p/q", integers and decimals ("0.25", "-3", "1e-3") exactly.
Rational parse_rational(std::string_view text);

/// Exact rational value of the shortest decimal that round-trips `value`,
/// so 0.01 becomes 1/100 rather than the nearest binary fraction.
Rational rational_from_double(double value);

BigInt floor_rational(const Rational& q);
BigInt ceil_rational(const Rational& q);
double to_double(const Rational& q);

/// Truncated subtraction n ∸ 1 = max{0, n − 1}.
BigInt monus_one(const BigInt& n);

/// 17 significant digits, the round-trip precision of a double.
std::string format_real(double value);

}  // namespace kmfp
