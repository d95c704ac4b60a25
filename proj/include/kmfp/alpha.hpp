#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kmfp/numeric.hpp"

namespace kmfp {

/// A divergence witness α: ℕ → ℕ from a fixed, serializable catalog:
///   identity      n ↦ n
///   linear(c)     n ↦ ⌈c·n⌉, c ≥ 0 rational (n ↦ 2n is linear(2))
///   tabulated     n ↦ values[n] for n < size, then continues with an
///                 integer slope s: values.back() + s·(n − size + 1)
class AlphaFunction {
 public:
  enum class Kind { identity, linear, tabulated };

  static AlphaFunction identity();
  static AlphaFunction linear(Rational c);
  static AlphaFunction tabulated(std::vector<BigInt> values, BigInt tail_slope);

  BigInt operator()(const BigInt& n) const;

  /// max{α(n+j) − j + 1 : j ≤ i}. Uses the shape of the catalog entry, so
  /// it costs O(table size) even for huge i.
  BigInt prime_max(const BigInt& i, const BigInt& n) const;

  /// Integers (slope, intercept) with α(m) ≤ slope·m + intercept for every m.
  /// `exact` is set when α equals that affine function.
  struct AffineBound {
    BigInt slope;
    BigInt intercept;
    bool exact = false;
  };
  AffineBound affine_majorant() const;

  Kind kind() const { return kind_; }
  std::string label() const;
  nlohmann::json descriptor() const;

 private:
  AlphaFunction() = default;

  Kind kind_ = Kind::identity;
  Rational c_ = 1;
  std::vector<BigInt> table_;
  BigInt tail_slope_ = 0;
};

/// {"kind":"identity"}, {"kind":"linear","c":"2"},
/// {"kind":"tabulated","values":[...],"tail_slope":2}. Raises ConfigError.
AlphaFunction alpha_from_json(const nlohmann::json& j);

}  // namespace kmfp
