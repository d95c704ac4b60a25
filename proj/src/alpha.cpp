#include "kmfp/alpha.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "kmfp/errors.hpp"

namespace kmfp {

AlphaFunction AlphaFunction::identity() { return AlphaFunction{}; }

AlphaFunction AlphaFunction::linear(Rational c) {
  if (c < 0) throw ArgumentError("alpha linear: c must be nonnegative");
  AlphaFunction a;
  a.kind_ = Kind::linear;
  a.c_ = std::move(c);
  return a;
}

AlphaFunction AlphaFunction::tabulated(std::vector<BigInt> values, BigInt tail_slope) {
  if (values.empty()) throw ArgumentError("alpha tabulated: table must not be empty");
  if (tail_slope < 0) throw ArgumentError("alpha tabulated: tail slope must be nonnegative");
  for (const auto& v : values) {
    if (v < 0) throw ArgumentError("alpha tabulated: values must be natural numbers");
  }
  AlphaFunction a;
  a.kind_ = Kind::tabulated;
  a.table_ = std::move(values);
  a.tail_slope_ = std::move(tail_slope);
  return a;
}

BigInt AlphaFunction::operator()(const BigInt& n) const {
  switch (kind_) {
    case Kind::identity:
      return n;
    case Kind::linear:
      return ceil_rational(c_ * Rational(n));
    case Kind::tabulated: {
      const BigInt size = table_.size();
      if (n < size) return table_[n.convert_to<std::size_t>()];
      return table_.back() + tail_slope_ * (n - size + 1);
    }
  }
  return n;
}

BigInt AlphaFunction::prime_max(const BigInt& i, const BigInt& n) const {
  const auto prime = [&](const BigInt& j) -> BigInt { return (*this)(n + j) - j + 1; };
  switch (kind_) {
    case Kind::identity:
      return n + 1;
    case Kind::linear:
      // ⌈c(m+1)⌉ − ⌈cm⌉ is ≥ 1 when c ≥ 1 and ≤ 1 when c < 1, so α′(·, n) is
      // nondecreasing resp. nonincreasing in j.
      return c_ >= 1 ? prime(i) : prime(BigInt(0));
    case Kind::tabulated: {
      // Enumerate the tabulated region plus the first tail point; past it
      // α′ moves by (slope − 1) per step.
      const BigInt size = table_.size();
      const BigInt first_tail = n >= size ? BigInt(0) : BigInt(size - n);
      const BigInt last = std::min(i, first_tail);
      BigInt best = prime(BigInt(0));
      for (BigInt j = 1; j <= last; ++j) best = std::max(best, prime(j));
      if (i > first_tail && tail_slope_ >= 1) best = std::max(best, prime(i));
      return best;
    }
  }
  return prime(i);
}

AlphaFunction::AffineBound AlphaFunction::affine_majorant() const {
  switch (kind_) {
    case Kind::identity:
      return {1, 0, true};
    case Kind::linear: {
      const BigInt slope = ceil_rational(c_);
      return {slope, 0, Rational(slope) == c_};
    }
    case Kind::tabulated: {
      const BigInt top = *std::max_element(table_.begin(), table_.end());
      return {tail_slope_, top, false};
    }
  }
  return {1, 0, true};
}

std::string AlphaFunction::label() const {
  switch (kind_) {
    case Kind::identity:
      return "identity";
    case Kind::linear:
      return fmt::format("ceil({}*n)", c_.str());
    case Kind::tabulated:
      return fmt::format("tabulated[{}]+{}n", table_.size(), tail_slope_.str());
  }
  return "alpha";
}

nlohmann::json AlphaFunction::descriptor() const {
  switch (kind_) {
    case Kind::identity:
      return {{"kind", "identity"}};
    case Kind::linear:
      return {{"kind", "linear"}, {"c", c_.str()}};
    case Kind::tabulated: {
      auto values = nlohmann::json::array();
      for (const auto& v : table_) values.push_back(v.str());
      return {{"kind", "tabulated"}, {"values", values}, {"tail_slope", tail_slope_.str()}};
    }
  }
  return {};
}

namespace {

BigInt natural_from_json(const nlohmann::json& v) {
  if (v.is_number_unsigned()) return BigInt(v.get<std::uint64_t>());
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return BigInt(v.get<std::int64_t>());
  if (v.is_string()) {
    const BigInt n(v.get<std::string>());
    if (n >= 0) return n;
  }
  throw ConfigError("expected a natural number, got " + v.dump());
}

}  // namespace

AlphaFunction alpha_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind")) throw ConfigError("alpha descriptor needs a 'kind'");
  const auto kind = j.at("kind").get<std::string>();
  try {
    if (kind == "identity") return AlphaFunction::identity();
    if (kind == "linear") {
      const auto& c = j.at("c");
      return AlphaFunction::linear(c.is_string() ? parse_rational(c.get<std::string>())
                                                 : rational_from_double(c.get<double>()));
    }
    if (kind == "doubling") return AlphaFunction::linear(2);
    if (kind == "tabulated") {
      std::vector<BigInt> values;
      for (const auto& v : j.at("values")) values.push_back(natural_from_json(v));
      const BigInt slope = j.contains("tail_slope") ? natural_from_json(j.at("tail_slope")) : BigInt(1);
      return AlphaFunction::tabulated(std::move(values), slope);
    }
  } catch (const ArgumentError& e) {
    throw ConfigError(e.what());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("alpha '{}': {}", kind, e.what()));
  }
  throw ConfigError("unknown alpha kind '" + kind + "'");
}

}  // namespace kmfp
