#pragma once

#include <cstdint>

#include "kmfp/alpha.hpp"
#include "kmfp/big_count.hpp"
#include "kmfp/numeric.hpp"

namespace kmfp {

struct RateInputs {
  Rational epsilon;
  Rational b;
  std::uint64_t K = 1;
  AlphaFunction alpha = AlphaFunction::identity();
};

// The α combinators. α′ may be negative; α⁺ ≥ α′(0,n) = α(n)+1 ≥ 1.
BigInt alpha_prime(const AlphaFunction& alpha, const BigInt& i, const BigInt& n);
BigInt alpha_plus(const AlphaFunction& alpha, const BigInt& i, const BigInt& n);
BigInt alpha_tilde(const AlphaFunction& alpha, const BigInt& i, const BigInt& n);

/// α̂(0,n) = α̃(0,n), α̂(i+1,n) = α̃(α̂(i,n),n).
///
/// Exact for affine catalog entries (closed form) and for any entry while
/// the recursion depth is small. Otherwise an upper bound obtained from the
/// affine majorant of α, which is sound because α̃ is increasing in i.
BigCount alpha_hat(const AlphaFunction& alpha, const BigInt& i, const BigInt& n);

/// Same with a first argument that may itself be an upper bound.
BigCount alpha_hat(const AlphaFunction& alpha, const BigCount& i, const BigInt& n);

/// N ≥ ⌈c·exp(e)⌉. For e ≤ 64 N is exactly ⌈c·exp(e)⌉ (rational series
/// with a remainder bound); above that N = ⌈c·3^e⌉.
BigCount ceil_exp_upper(const Rational& c, const BigInt& e);

/// Intermediate values of h / h̃: M, the exponent K(M+1), E ≥ ⌈coef·exp(K(M+1))⌉
/// and the result α̂(E ∸ 1, M).
struct RateEvaluation {
  BigInt M;
  BigInt exponent;
  Rational coefficient;
  BigCount E;
  BigCount value;
};

RateEvaluation evaluate_brs(const RateInputs& in);       // coefficient 2b, M ≥ (1+2b)/ε
RateEvaluation evaluate_ishikawa(const RateInputs& in);  // coefficient 12b, M ≥ (1+6b)/ε

/// h(ε,b,K,α).
BigCount rate_brs(const RateInputs& in);
/// h̃(ε,b,K,α).
BigCount rate_ishikawa(const RateInputs& in);
/// g(ε,b₁,b₂,K,α) = max{⌈1/ε⌉+1, h(ε, 2b₁+b₂, K, α)}.
BigCount rate_product(const Rational& epsilon, const Rational& b1, const Rational& b2,
                      std::uint64_t K, const AlphaFunction& alpha);
/// g̃(ε,b,K,α) := max{⌈1/ε⌉+1, h̃(ε,b,K,α)}.
BigCount rate_product_ishikawa(const Rational& epsilon, const Rational& b, std::uint64_t K,
                               const AlphaFunction& alpha);

/// ⌈1/ε⌉ + 1, the floor that g and g̃ never go below.
BigInt reciprocal_floor(const Rational& epsilon);

}  // namespace kmfp
