#include <doctest.h>

#include "kmfp/errors.hpp"
#include "kmfp/rates.hpp"

using namespace kmfp;

namespace {
const auto kId = AlphaFunction::identity();
const auto kDouble = AlphaFunction::linear(2);
BigInt big(long v) { return BigInt(v); }
}  // namespace

TEST_CASE("alpha combinators for the identity") {
  CHECK(alpha_prime(kId, big(4), big(3)) == 4);
  CHECK(alpha_plus(kId, big(4), big(3)) == 4);
  CHECK(alpha_tilde(kId, big(4), big(3)) == 8);
  CHECK(alpha_hat(kId, big(2), big(3)).value() == 12);
  CHECK(alpha_hat(kId, big(0), big(5)).value() == alpha_tilde(kId, big(0), big(5)));
}

TEST_CASE("alpha combinators for doubling") {
  CHECK(alpha_prime(kDouble, big(3), big(1)) == 2 * 1 + 3 + 1);
  CHECK(alpha_tilde(kDouble, big(3), big(1)) == 2 * 3 + 2 * 1 + 1);
  CHECK(alpha_hat(kDouble, big(1), big(1)).value() == 9);
  CHECK(alpha_hat(kDouble, big(2), big(3)).value() == 49);
}

TEST_CASE("alpha prime can be negative, alpha plus cannot drop below alpha(n)+1") {
  const auto zero = AlphaFunction::linear(0);
  CHECK(alpha_prime(zero, big(5), big(0)) == -4);
  CHECK(alpha_plus(zero, big(5), big(0)) == 1);
}

TEST_CASE("ceil_exp_upper") {
  CHECK(ceil_exp_upper(2, big(2)).value() == 15);
  CHECK(ceil_exp_upper(12, big(2)).value() == 89);
  CHECK(ceil_exp_upper(1, big(0)).value() == 1);
  CHECK(ceil_exp_upper(Rational(1, 2), big(2)).value() == 4);
  CHECK(ceil_exp_upper(Rational(12, 100), big(2)).value() == 1);
  CHECK(ceil_exp_upper(1, big(64)).is_exact());
  const auto above = ceil_exp_upper(1, big(65));
  CHECK_FALSE(above.is_exact());
  CHECK(above.value() == boost::multiprecision::pow(BigInt(3), 65));
}

TEST_CASE("h") {
  CHECK(rate_brs({4, 1, 1, kId}).value() == 30);
  CHECK(rate_brs({4, Rational(1, 4), 1, kId}).value() == 8);
  CHECK(rate_brs({1, 1, 1, kId}).value() == 440);
  const auto ev = evaluate_brs({4, 1, 1, kId});
  CHECK(ev.M == 1);
  CHECK(ev.E.value() == 15);
  CHECK_THROWS_AS(rate_brs({0, 1, 1, kId}), ArgumentError);
  CHECK_THROWS_AS(rate_brs({1, -1, 1, kId}), ArgumentError);
  CHECK_THROWS_AS(rate_brs({1, 1, 0, kId}), ArgumentError);
}

TEST_CASE("h tilde and g tilde") {
  CHECK(rate_ishikawa({7, 1, 1, kId}).value() == 178);
  CHECK(rate_product_ishikawa(7, 1, 1, kId).value() == 178);
  CHECK(rate_product_ishikawa(10, Rational(1, 100), 1, kId).value() == 2);
  const auto ev = evaluate_ishikawa({10, Rational(1, 100), 1, kId});
  CHECK(ev.E.value() == 1);
}

TEST_CASE("g") {
  CHECK(rate_product(4, Rational(1, 4), Rational(1, 2), 1, kId).value() == 30);
  CHECK(rate_product(1, Rational(1, 4), Rational(1, 2), 1, kId).value() == 440);
  CHECK(rate_product(4, Rational(1, 100), Rational(1, 100), 2, kDouble).value() == 45);
  CHECK(reciprocal_floor(Rational(1, 100)) == 101);
  CHECK(reciprocal_floor(4) == 2);
}

TEST_CASE("truncated subtraction at E = 0 boundary") {
  CHECK(monus_one(BigInt(0)) == 0);
  CHECK(monus_one(BigInt(1)) == 0);
  CHECK(monus_one(BigInt(7)) == 6);
}

TEST_CASE("large inputs degrade to bounds, never to wrong exact values") {
  const auto small_eps = rate_brs({Rational(1, 100), 1, 2, kDouble});
  CHECK_FALSE(small_eps.is_exact());
  CHECK(small_eps.to_string().rfind("<= ", 0) == 0);
  const auto tower = rate_brs({Rational(1, 1000), 5, 3, kDouble});
  CHECK_FALSE(tower.has_value());
  CHECK(tower.log10_upper() > 1000000);
}
