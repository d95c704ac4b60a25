#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "kmfp/numeric.hpp"

namespace kmfp {

/// Integers with more decimal digits than this are not materialized; only a
/// rational upper bound on their log10 is kept.
inline constexpr std::size_t kExactDigitLimit = 1'000'000;

/// A natural number produced by a rate formula. Three states:
///   exact      the value itself
///   upper      an integer N known to be >= the true value
///   magnitude  only L with log10(value) <= L is known (value too large)
/// Every operation keeps the result sound: it never reports less than the
/// true value.
class BigCount {
 public:
  BigCount() : value_(BigInt(0)), exact_(true) {}

  static BigCount exact(BigInt v);
  static BigCount upper(BigInt v);
  static BigCount magnitude(Rational log10_upper);
  /// `v` exact (or an upper bound when `exact` is false), demoted to a
  /// magnitude if it has more than kExactDigitLimit digits.
  static BigCount from(BigInt v, bool exact);

  bool is_exact() const { return value_.has_value() && exact_; }
  bool has_value() const { return value_.has_value(); }
  /// Raises std::logic_error in the magnitude state.
  const BigInt& value() const;

  /// Upper bound on log10 of the value; -1 stands in for log10(0).
  Rational log10_upper() const;
  /// Upper bound on the number of decimal digits.
  BigInt digits_upper() const;

  /// The (bound) value as a machine integer when it fits.
  std::optional<std::uint64_t> to_u64() const;
  /// True when the count is certainly <= limit.
  bool at_most(const BigInt& limit) const;

  /// "30", "<= 31" or "<= 1.23457e+1234567 (1234568 digits)".
  std::string to_string() const;
  nlohmann::json to_json() const;

  friend BigCount max(const BigCount& a, const BigCount& b);
  friend bool operator==(const BigCount& a, const BigCount& b);

 private:
  std::optional<BigInt> value_;
  bool exact_ = true;
  Rational log10_;
};

/// Directed-rounding helpers (MPFR, rounded toward +inf), exact rationals out.
Rational log10_upper(const BigInt& v);
Rational log10_upper(const Rational& q);

/// "m.mmmmme+E" with a mantissa rounded up, so the result is >= 10^L.
std::string scientific_upper(const Rational& log10_value);

}  // namespace kmfp
