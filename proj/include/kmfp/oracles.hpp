#pragma once

#include <cstddef>
#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "kmfp/maps.hpp"
#include "kmfp/spaces.hpp"

namespace kmfp {

/// Returns ε-fixed points of nonexpansive self-maps of one space M. Every
/// answer is re-checked: solve() raises OracleFailure unless the returned u
/// lies in M and d(u, f(u)) ≤ ε.
class AfppOracle {
 public:
  explicit AfppOracle(SpacePtr space) : space_(std::move(space)) {}
  virtual ~AfppOracle() = default;

  Point solve(const NonexpansiveMap& f, double eps) const;

  const SpacePtr& space() const { return space_; }
  virtual std::string name() const = 0;
  virtual nlohmann::json descriptor() const = 0;

 protected:
  virtual Point search(const NonexpansiveMap& f, double eps) const = 0;

 private:
  SpacePtr space_;
};

using OraclePtr = std::shared_ptr<const AfppOracle>;

/// Bounded interval [a, b]. Evaluates f(x) − x on a grid, returns a grid
/// point within ε if there is one, else zooms into a cell where the sign
/// changes from + to −. Such a cell exists because f maps [a,b] into itself.
class GridOracle final : public AfppOracle {
 public:
  GridOracle(std::shared_ptr<const Interval> space, std::size_t cells = 32, std::size_t levels = 60);
  std::string name() const override { return "grid"; }
  nlohmann::json descriptor() const override;

 protected:
  Point search(const NonexpansiveMap& f, double eps) const override;

 private:
  double a_;
  double b_;
  std::size_t cells_;
  std::size_t levels_;
};

/// One-dimensional maps of the form f(x) = a·x + c: two evaluations give
/// a and c, the answer is c/(1−a). Anything else fails the post-check.
class AffineOracle final : public AfppOracle {
 public:
  explicit AffineOracle(std::shared_ptr<const Interval> space);
  std::string name() const override { return "affine"; }
  nlohmann::json descriptor() const override { return {{"kind", "affine"}}; }

 protected:
  Point search(const NonexpansiveMap& f, double eps) const override;

 private:
  std::shared_ptr<const Interval> interval_;
};

/// Krasnoselski–Mann with λ ≡ 1/2 until the residual drops below ε. Works on
/// any hyperbolic M where the orbit converges within max_steps, e.g. bounded
/// ones.
class KmOracle final : public AfppOracle {
 public:
  KmOracle(HyperbolicPtr space, std::size_t max_steps, Point start);
  std::string name() const override { return "km"; }
  nlohmann::json descriptor() const override;

 protected:
  Point search(const NonexpansiveMap& f, double eps) const override;

 private:
  HyperbolicPtr hyperbolic_;
  std::size_t max_steps_;
  Point start_;
};

}  // namespace kmfp
