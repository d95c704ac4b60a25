#include "kmfp/rates.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "kmfp/errors.hpp"

namespace kmfp {

namespace {

constexpr std::uint64_t kDirectDepth = 1u << 16;
constexpr std::uint64_t kSeriesExponentLimit = 64;
constexpr unsigned kMaxSeriesTerms = 4000;

// α̃(i,n) ≤ c·i + d for all i, with c = max(slope,1), d = slope·n + intercept + 1.
struct LinearStep {
  BigInt c;
  BigInt d;
  bool exact;
};

LinearStep linear_step(const AlphaFunction& alpha, const BigInt& n) {
  const auto bound = alpha.affine_majorant();
  return {std::max(bound.slope, BigInt(1)), bound.slope * n + bound.intercept + 1, bound.exact};
}

// a_i for a_0 = d, a_{k+1} = c·a_k + d.
BigCount linear_recursion(const LinearStep& step, const BigInt& i) {
  if (step.c == 1) return BigCount::from(step.d * (i + 1), step.exact);
  // a_i = d(c^{i+1} − 1)/(c − 1) < d·c^{i+1}
  const Rational log_c = log10_upper(step.c);
  const Rational log_bound = log10_upper(step.d) + log_c * Rational(i + 1);
  if (log_bound > kExactDigitLimit + 1) return BigCount::magnitude(log_bound);
  const BigInt power = boost::multiprecision::pow(step.c, (i + 1).convert_to<unsigned>());
  return BigCount::from(step.d * (power - 1) / (step.c - 1), step.exact);
}

std::optional<BigInt> direct_recursion(const AlphaFunction& alpha, const BigInt& i,
                                       const BigInt& n) {
  if (i > kDirectDepth) return std::nullopt;
  BigInt a = alpha_tilde(alpha, BigInt(0), n);
  for (BigInt k = 0; k < i; ++k) {
    a = alpha_tilde(alpha, a, n);
    if (mpz_sizeinbase(a.backend().data(), 10) > kExactDigitLimit) return std::nullopt;
  }
  return a;
}

void require_positive(const Rational& v, const char* name) {
  if (v <= 0) throw ArgumentError(fmt::format("{} must be positive, got {}", name, v.str()));
}

void check_inputs(const RateInputs& in) {
  require_positive(in.epsilon, "epsilon");
  require_positive(in.b, "b");
  if (in.K == 0) throw ArgumentError("K must be at least 1");
}

RateEvaluation evaluate(const RateInputs& in, const Rational& coefficient, const Rational& m_num) {
  check_inputs(in);
  RateEvaluation ev;
  ev.M = ceil_rational(m_num / in.epsilon);
  if (ev.M < 0) ev.M = 0;
  ev.exponent = BigInt(in.K) * (ev.M + 1);
  ev.coefficient = coefficient;
  ev.E = ceil_exp_upper(coefficient, ev.exponent);
  if (ev.E.has_value()) {
    const BigCount first = BigCount::from(monus_one(ev.E.value()), ev.E.is_exact());
    ev.value = alpha_hat(in.alpha, first, ev.M);
  } else {
    ev.value = alpha_hat(in.alpha, ev.E, ev.M);  // E ∸ 1 ≤ E
  }
  return ev;
}

}  // namespace

BigInt alpha_prime(const AlphaFunction& alpha, const BigInt& i, const BigInt& n) {
  return alpha(n + i) - i + 1;
}

BigInt alpha_plus(const AlphaFunction& alpha, const BigInt& i, const BigInt& n) {
  if (i < 0 || n < 0) throw ArgumentError("alpha_plus: arguments must be natural numbers");
  return alpha.prime_max(i, n);
}

BigInt alpha_tilde(const AlphaFunction& alpha, const BigInt& i, const BigInt& n) {
  return i + alpha_plus(alpha, i, n);
}

BigCount alpha_hat(const AlphaFunction& alpha, const BigInt& i, const BigInt& n) {
  if (i < 0 || n < 0) throw ArgumentError("alpha_hat: arguments must be natural numbers");
  const LinearStep step = linear_step(alpha, n);
  if (step.exact) return linear_recursion(step, i);
  if (auto a = direct_recursion(alpha, i, n)) return BigCount::exact(std::move(*a));
  return linear_recursion({step.c, step.d, false}, i);
}

BigCount alpha_hat(const AlphaFunction& alpha, const BigCount& i, const BigInt& n) {
  if (i.has_value()) {
    BigCount r = alpha_hat(alpha, i.value(), n);
    if (!i.is_exact() && r.has_value()) return BigCount::upper(r.value());
    return r;
  }
  const LinearStep step = linear_step(alpha, n);
  if (step.c != 1) {
    throw MagnitudeOverflow(fmt::format(
        "alpha_hat: depth has about {} digits and alpha grows faster than n; the result is a "
        "tower of exponentials",
        i.digits_upper().str()));
  }
  // d(i+1) ≤ 2·d·i for i ≥ 1.
  return BigCount::magnitude(log10_upper(step.d) + i.log10_upper() + log10_upper(BigInt(2)));
}

BigCount ceil_exp_upper(const Rational& c, const BigInt& e) {
  if (c <= 0) throw ArgumentError("ceil_exp_upper: c must be positive");
  if (e < 0) throw ArgumentError("ceil_exp_upper: exponent must be natural");
  if (e == 0) return BigCount::exact(ceil_rational(c));

  if (e > kSeriesExponentLimit) {
    // c·3^e ≥ c·e^e. ⌈x⌉ ≤ 2x once x ≥ 1, which covers the magnitude case.
    const Rational log_bound = log10_upper(c) + log10_upper(BigInt(3)) * Rational(e);
    if (log_bound > kExactDigitLimit - 2) {
      return BigCount::magnitude(log_bound + log10_upper(BigInt(2)));
    }
    const BigInt power = boost::multiprecision::pow(BigInt(3), e.convert_to<unsigned>());
    return BigCount::upper(ceil_rational(c * Rational(power)));
  }

  // exp(x) = Σ x^k/k!; the tail after term K is at most t_{K+1}·(K+2)/(K+2−x).
  const BigInt x = e;
  const unsigned xs = x.convert_to<unsigned>();
  Rational sum = 1;
  Rational term = 1;
  unsigned k = 0;
  const auto advance_to = [&](unsigned target) {
    while (k < target) {
      ++k;
      term *= Rational(x, k);
      sum += term;
    }
  };
  advance_to(2 * xs + 4);
  while (true) {
    const Rational next = term * Rational(x, k + 1);
    const Rational tail = next * Rational(k + 2, k + 2 - xs);
    const BigInt candidate = ceil_rational(c * (sum + tail));
    // The true value lies in (c·sum, c·(sum+tail)].
    if (c * sum > Rational(candidate - 1)) return BigCount::exact(candidate);
    if (k >= kMaxSeriesTerms) return BigCount::upper(candidate);
    advance_to(k + 16);
  }
}

RateEvaluation evaluate_brs(const RateInputs& in) { return evaluate(in, 2 * in.b, 1 + 2 * in.b); }

RateEvaluation evaluate_ishikawa(const RateInputs& in) {
  return evaluate(in, 12 * in.b, 1 + 6 * in.b);
}

BigCount rate_brs(const RateInputs& in) { return evaluate_brs(in).value; }

BigCount rate_ishikawa(const RateInputs& in) { return evaluate_ishikawa(in).value; }

BigInt reciprocal_floor(const Rational& epsilon) {
  require_positive(epsilon, "epsilon");
  return ceil_rational(1 / epsilon) + 1;
}

BigCount rate_product(const Rational& epsilon, const Rational& b1, const Rational& b2,
                      std::uint64_t K, const AlphaFunction& alpha) {
  require_positive(b1, "b1");
  require_positive(b2, "b2");
  const BigCount h = rate_brs({epsilon, 2 * b1 + b2, K, alpha});
  return max(BigCount::exact(reciprocal_floor(epsilon)), h);
}

BigCount rate_product_ishikawa(const Rational& epsilon, const Rational& b, std::uint64_t K,
                               const AlphaFunction& alpha) {
  const BigCount h = rate_ishikawa({epsilon, b, K, alpha});
  return max(BigCount::exact(reciprocal_floor(epsilon)), h);
}

}  // namespace kmfp
