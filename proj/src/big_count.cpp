#include "kmfp/big_count.hpp"

#include <gmp.h>
#include <mpfr.h>

#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "kmfp/errors.hpp"

namespace kmfp {

namespace {

constexpr mpfr_prec_t kPrecision = 256;

// RAII for one mpfr_t.
class Mpfr {
 public:
  Mpfr() { mpfr_init2(v_, kPrecision); }
  ~Mpfr() { mpfr_clear(v_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_ptr get() { return v_; }

 private:
  mpfr_t v_;
};

Rational to_rational(Mpfr& x) {
  Rational q;
  mpfr_get_q(q.backend().data(), x.get());
  return q;
}

std::size_t digit_estimate(const BigInt& v) {
  return mpz_sizeinbase(v.backend().data(), 10);  // exact or one too many
}

}  // namespace

Rational log10_upper(const BigInt& v) {
  if (v <= 0) throw ArgumentError("log10 of a nonpositive integer");
  Mpfr x;
  Mpfr y;
  mpfr_set_z(x.get(), v.backend().data(), MPFR_RNDU);
  mpfr_log10(y.get(), x.get(), MPFR_RNDU);
  return to_rational(y);
}

Rational log10_upper(const Rational& q) {
  if (q <= 0) throw ArgumentError("log10 of a nonpositive rational");
  Mpfr x;
  Mpfr y;
  mpfr_set_q(x.get(), q.backend().data(), MPFR_RNDU);
  mpfr_log10(y.get(), x.get(), MPFR_RNDU);
  return to_rational(y);
}

std::string scientific_upper(const Rational& log10_value) {
  BigInt exponent = floor_rational(log10_value);
  const Rational frac = log10_value - Rational(exponent);
  Mpfr f;
  Mpfr m;
  mpfr_set_q(f.get(), frac.backend().data(), MPFR_RNDU);
  mpfr_exp10(m.get(), f.get(), MPFR_RNDU);
  mpfr_mul_ui(m.get(), m.get(), 100000, MPFR_RNDU);
  mpfr_ceil(m.get(), m.get());
  long scaled = mpfr_get_si(m.get(), MPFR_RNDU);
  if (scaled >= 1000000) {
    scaled = 100000;
    exponent += 1;
  }
  return fmt::format("{}.{:05d}e+{}", scaled / 100000, scaled % 100000, exponent.str());
}

BigCount BigCount::exact(BigInt v) { return from(std::move(v), true); }

BigCount BigCount::upper(BigInt v) { return from(std::move(v), false); }

BigCount BigCount::from(BigInt v, bool exact) {
  if (v < 0) throw ArgumentError("BigCount: negative value");
  BigCount c;
  if (digit_estimate(v) > kExactDigitLimit) return magnitude(kmfp::log10_upper(v));
  c.value_ = std::move(v);
  c.exact_ = exact;
  return c;
}

BigCount BigCount::magnitude(Rational log10_upper) {
  BigCount c;
  c.value_.reset();
  c.exact_ = false;
  c.log10_ = std::move(log10_upper);
  return c;
}

const BigInt& BigCount::value() const {
  if (!value_) throw std::logic_error("BigCount: value too large to materialize");
  return *value_;
}

Rational BigCount::log10_upper() const {
  if (!value_) return log10_;
  if (*value_ == 0) return -1;
  return kmfp::log10_upper(*value_);
}

BigInt BigCount::digits_upper() const {
  if (value_) return *value_ == 0 ? BigInt(1) : BigInt(digit_estimate(*value_));
  return floor_rational(log10_) + 1;
}

std::optional<std::uint64_t> BigCount::to_u64() const {
  if (!value_ || *value_ > std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
  return value_->convert_to<std::uint64_t>();
}

bool BigCount::at_most(const BigInt& limit) const { return value_ && *value_ <= limit; }

std::string BigCount::to_string() const {
  if (!value_) {
    return fmt::format("<= {} ({} digits)", scientific_upper(log10_), digits_upper().str());
  }
  return exact_ ? value_->str() : "<= " + value_->str();
}

nlohmann::json BigCount::to_json() const {
  if (!value_) {
    return {{"kind", "magnitude"},
            {"scientific_upper", scientific_upper(log10_)},
            {"digits_upper", digits_upper().str()}};
  }
  return {{"kind", exact_ ? "exact" : "upper_bound"}, {"value", value_->str()}};
}

BigCount max(const BigCount& a, const BigCount& b) {
  if (a.value_ && b.value_) {
    if (*a.value_ > *b.value_) return a;
    if (*b.value_ > *a.value_) return b;
    return a.exact_ ? a : b;
  }
  const Rational la = a.log10_upper();
  const Rational lb = b.log10_upper();
  return BigCount::magnitude(la > lb ? la : lb);
}

bool operator==(const BigCount& a, const BigCount& b) {
  if (a.value_.has_value() != b.value_.has_value()) return false;
  if (a.value_) return *a.value_ == *b.value_ && a.exact_ == b.exact_;
  return a.log10_ == b.log10_;
}

}  // namespace kmfp
