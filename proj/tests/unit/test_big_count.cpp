#include <doctest.h>

#include "kmfp/big_count.hpp"
#include "kmfp/errors.hpp"

using namespace kmfp;

TEST_CASE("exact and upper values") {
  const auto e = BigCount::exact(BigInt(30));
  CHECK(e.is_exact());
  CHECK(e.to_string() == "30");
  CHECK(e.to_u64() == 30u);
  CHECK(e.at_most(BigInt(30)));
  CHECK_FALSE(e.at_most(BigInt(29)));
  const auto u = BigCount::upper(BigInt(12345));
  CHECK_FALSE(u.is_exact());
  CHECK(u.to_string() == "<= 12345");
  CHECK(u.to_json()["kind"] == "upper_bound");
  CHECK(max(e, u).value() == 12345);
  CHECK_FALSE(max(e, u).is_exact());
  CHECK(max(e, BigCount::exact(BigInt(2))) == e);
}

TEST_CASE("magnitudes") {
  const auto m = BigCount::magnitude(Rational(2000000));
  CHECK_FALSE(m.has_value());
  CHECK_FALSE(m.at_most(BigInt(1) << 1000));
  CHECK(m.digits_upper() == 2000001);
  CHECK(m.to_json()["kind"] == "magnitude");
  CHECK(m.to_string().find("digits") != std::string::npos);
  CHECK_THROWS(m.value());
  CHECK_FALSE(m.to_u64().has_value());
}

TEST_CASE("huge values collapse to magnitudes") {
  const BigInt huge = boost::multiprecision::pow(BigInt(10), 1000001);
  const auto c = BigCount::from(huge, true);
  CHECK_FALSE(c.has_value());
  CHECK(c.log10_upper() >= 1000001);
  CHECK(c.log10_upper() < 1000001 + Rational(1, 1000));
}

TEST_CASE("log10 upper bounds") {
  CHECK(log10_upper(BigInt(1000)) >= 3);
  CHECK(log10_upper(BigInt(1000)) < 3 + Rational(1, 1000000));
  CHECK(log10_upper(BigInt(999)) < 3);
  CHECK(scientific_upper(Rational(3)).rfind("1.0000", 0) == 0);
}
