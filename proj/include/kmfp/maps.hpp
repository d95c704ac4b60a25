#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "kmfp/spaces.hpp"

namespace kmfp {

class Schedule;

using PointFn = std::function<Point(const Point&)>;

/// A map claimed to be 1-Lipschitz. The claim can be falsified by sampling
/// (falsify_nonexpansive) but is never certified. Self-maps have
/// codomain == domain; selection functions δ: M → C use a separate codomain.
class NonexpansiveMap {
 public:
  NonexpansiveMap(SpacePtr domain, PointFn fn, std::string label);
  NonexpansiveMap(SpacePtr domain, SpacePtr codomain, PointFn fn, std::string label);

  /// Raises DomainError when x is not in the domain.
  Point operator()(const Point& x) const;

  const SpacePtr& domain() const { return domain_; }
  const SpacePtr& codomain() const { return codomain_; }
  const std::string& label() const { return label_; }

 private:
  SpacePtr domain_;
  SpacePtr codomain_;
  PointFn fn_;
  std::string label_;
};

/// δ: M → C (or into ∪ C_u), nonexpansive.
using SelectionFunction = NonexpansiveMap;

using ProductFn = std::function<std::pair<Point, Point>(const Point& x, const Point& u)>;

/// T: H → H on a product (or family) space, written componentwise
/// (x, u) ↦ (P₁T(x,u), P₂T(x,u)).
class ProductMap {
 public:
  ProductMap(ProductPtr domain, ProductFn fn, std::string label);

  /// Raises DomainError when (x, u) ∉ H. The image is not checked.
  std::pair<Point, Point> operator()(const Point& x, const Point& u) const;
  /// Same map on joined product points.
  Point apply(const Point& p) const;

  /// T viewed as a self-map of H.
  NonexpansiveMap as_map() const;

  const ProductPtr& domain() const { return domain_; }
  const std::string& label() const { return label_; }

 private:
  ProductPtr domain_;
  ProductFn fn_;
  std::string label_;
};

/// T_u: x ↦ P₁(T(x, u)) on the fiber C (or C_u). Raises DomainError if u ∉ M.
NonexpansiveMap slice(const ProductMap& t, const Point& u);

/// φₙ: M → M, u ↦ P₂(T((δ(u))ₙ, u)), where (δ(u))ₙ is the n-th
/// Krasnoselski–Mann iterate of T_u started at δ(u). The orbit is
/// recomputed on every call.
NonexpansiveMap phi(const ProductMap& t, const SelectionFunction& delta, const Schedule& sched,
                    std::size_t n);

struct Counterexample {
  Point x;
  Point y;
  double distance = 0.0;        // d(x, y)
  double image_distance = 0.0;  // d(f(x), f(y))
};

/// Samples `trials` pairs from the domain and returns the first pair with
/// d(f(x), f(y)) > d(x, y) + η, if any.
std::optional<Counterexample> falsify_nonexpansive(const NonexpansiveMap& f, std::size_t trials,
                                                   std::uint64_t seed, double eta);

}  // namespace kmfp
