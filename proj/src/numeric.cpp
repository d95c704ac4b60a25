#include "kmfp/numeric.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <system_error>

#include <fmt/format.h>

#include "kmfp/errors.hpp"

namespace kmfp {

namespace {

Rational parse_decimal(std::string_view text) {
  const std::string original(text);
  if (text.empty()) throw ArgumentError("empty number");
  bool negative = false;
  if (text.front() == '+' || text.front() == '-') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  std::string digits;
  long long scale = 0;
  bool seen_point = false;
  bool seen_digit = false;
  std::size_t pos = 0;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      seen_digit = true;
      if (seen_point) ++scale;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) throw ArgumentError("not a number: '" + original + "'");
  if (pos < text.size()) {
    if (text[pos] != 'e' && text[pos] != 'E') {
      throw ArgumentError("not a number: '" + original + "'");
    }
    std::string_view exponent = text.substr(pos + 1);
    if (!exponent.empty() && exponent.front() == '+') exponent.remove_prefix(1);
    long long e = 0;
    const auto [end, ec] =
        std::from_chars(exponent.data(), exponent.data() + exponent.size(), e);
    if (ec != std::errc{} || end != exponent.data() + exponent.size() || exponent.empty()) {
      throw ArgumentError("bad exponent in '" + original + "'");
    }
    scale -= e;
  }
  // A leading 0 would make the string constructor read octal.
  const auto nonzero = digits.find_first_not_of('0');
  BigInt mantissa(nonzero == std::string::npos ? std::string("0") : digits.substr(nonzero));
  if (negative) mantissa = -mantissa;
  BigInt ten_pow = 1;
  const long long magnitude = scale < 0 ? -scale : scale;
  if (magnitude > 100000) throw ArgumentError("exponent out of range in '" + original + "'");
  for (long long i = 0; i < magnitude; ++i) ten_pow *= 10;
  if (scale >= 0) return Rational(mantissa, ten_pow);
  return Rational(mantissa * ten_pow);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text);
  const Rational num = parse_decimal(text.substr(0, slash));
  const Rational den = parse_decimal(text.substr(slash + 1));
  if (den == 0) throw ArgumentError("zero denominator in '" + std::string(text) + "'");
  return num / den;
}

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) throw ArgumentError("non-finite value has no rational form");
  char buffer[64];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc{}) throw ArgumentError("cannot format value");
  return parse_decimal(std::string_view(buffer, static_cast<std::size_t>(end - buffer)));
}

BigInt floor_rational(const Rational& q) {
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  BigInt quotient = num / den;  // truncates toward zero
  if (num < 0 && quotient * den != num) quotient -= 1;
  return quotient;
}

BigInt ceil_rational(const Rational& q) { return -floor_rational(-q); }

double to_double(const Rational& q) { return q.convert_to<double>(); }

BigInt monus_one(const BigInt& n) { return n > 0 ? BigInt(n - 1) : BigInt(0); }

std::string format_real(double value) { return fmt::format("{:.17g}", value); }

}  // namespace kmfp
