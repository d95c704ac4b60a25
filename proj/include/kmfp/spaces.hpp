#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace kmfp {

/// Membership slack on closed sets, absorbs rounding after long iterations.
inline constexpr double kBoundarySlack = 1e-12;

/// Default tolerance for axiom and inequality checks.
inline constexpr double kDefaultEta = 1e-9;

/// An element of some space. The coordinates are interpreted by the space
/// that produced the point (a vector for ℝⁿ, real/imaginary parts in the
/// Poincaré disk, (ray, offset) in a star tree, x followed by u in a
/// product). Using a point with a space of a different dimension raises
/// DomainError.
struct Point {
  std::vector<double> coords;

  Point() = default;
  Point(std::initializer_list<double> values) : coords(values) {}
  explicit Point(std::vector<double> values) : coords(std::move(values)) {}

  std::size_t size() const { return coords.size(); }
  double operator[](std::size_t i) const { return coords[i]; }
  double& operator[](std::size_t i) { return coords[i]; }

  friend bool operator==(const Point&, const Point&) = default;
};

std::string to_string(const Point& p);
nlohmann::json point_to_json(const Point& p);  // coordinates as 17-digit strings

class MetricSpace {
 public:
  virtual ~MetricSpace() = default;

  virtual std::string kind() const = 0;
  virtual std::size_t dimension() const = 0;
  virtual bool contains(const Point& x) const = 0;
  virtual Point sample(std::mt19937_64& rng) const = 0;
  virtual nlohmann::json descriptor() const = 0;
  virtual std::vector<std::string> coordinate_names() const;
  /// Diameter when known to be finite.
  virtual std::optional<double> diameter() const { return std::nullopt; }

  /// Distance between two points of this space. Raises DomainError when a
  /// point has the wrong number of coordinates.
  double distance(const Point& x, const Point& y) const;

  void require_member(const Point& x, const std::string& what) const;

 protected:
  virtual double do_distance(const Point& x, const Point& y) const = 0;
};

/// A metric space with a convexity operator W satisfying (W1)–(W4).
class HyperbolicSpace : public MetricSpace {
 public:
  /// W(x, y, λ), written (1−λ)x ⊕ λy. Validates membership and λ ∈ [0,1].
  Point convex_comb(const Point& x, const Point& y, double lambda) const;

 protected:
  virtual Point do_combine(const Point& x, const Point& y, double lambda) const = 0;
};

using SpacePtr = std::shared_ptr<const MetricSpace>;
using HyperbolicPtr = std::shared_ptr<const HyperbolicSpace>;

inline Point convex_comb(const HyperbolicSpace& s, const Point& x, const Point& y, double lambda) {
  return s.convex_comb(x, y, lambda);
}

// Concrete spaces -----------------------------------------------------------

/// ℝⁿ with the Euclidean norm; W is linear interpolation. Samples are drawn
/// from the cube [-10, 10]ⁿ.
class EuclideanSpace final : public HyperbolicSpace {
 public:
  explicit EuclideanSpace(std::size_t n);
  std::string kind() const override { return "euclidean"; }
  std::size_t dimension() const override { return n_; }
  bool contains(const Point& x) const override;
  Point sample(std::mt19937_64& rng) const override;
  nlohmann::json descriptor() const override;
  std::vector<std::string> coordinate_names() const override;

 protected:
  double do_distance(const Point& x, const Point& y) const override;
  Point do_combine(const Point& x, const Point& y, double lambda) const override;

 private:
  std::size_t n_;
};

/// A closed interval [a, b] ⊆ ℝ; either end may be infinite. Samples from an
/// infinite side are drawn within 20 units of the finite end (or of 0).
class Interval final : public HyperbolicSpace {
 public:
  Interval(double a, double b);
  std::string kind() const override { return "interval"; }
  std::size_t dimension() const override { return 1; }
  bool contains(const Point& x) const override;
  Point sample(std::mt19937_64& rng) const override;
  nlohmann::json descriptor() const override;
  std::vector<std::string> coordinate_names() const override { return {"x"}; }
  std::optional<double> diameter() const override;

  double lower() const { return a_; }
  double upper() const { return b_; }
  bool bounded() const;

 protected:
  double do_distance(const Point& x, const Point& y) const override;
  Point do_combine(const Point& x, const Point& y, double lambda) const override;

 private:
  double a_;
  double b_;
};

/// The open unit disk with the curvature −1 Poincaré metric,
/// d(0, z) = 2·artanh|z|. Geodesics are unique, so W(x, y, λ) is the point
/// at fraction λ along the geodesic from x to y. Samples lie in |z| ≤ 0.9.
class PoincareDisk final : public HyperbolicSpace {
 public:
  std::string kind() const override { return "poincare_disk"; }
  std::size_t dimension() const override { return 2; }
  bool contains(const Point& x) const override;
  Point sample(std::mt19937_64& rng) const override;
  nlohmann::json descriptor() const override;
  std::vector<std::string> coordinate_names() const override { return {"re", "im"}; }

 protected:
  double do_distance(const Point& x, const Point& y) const override;
  Point do_combine(const Point& x, const Point& y, double lambda) const override;
};

/// A finite star ("spider"): `rays` closed segments of length `length`
/// glued at a hub. Points are (ray, offset); the hub is offset 0 and is
/// stored with ray 0. An ℝ-tree, hence CAT(0).
class StarTree final : public HyperbolicSpace {
 public:
  StarTree(std::size_t rays, double length);
  std::string kind() const override { return "star_tree"; }
  std::size_t dimension() const override { return 2; }
  bool contains(const Point& x) const override;
  Point sample(std::mt19937_64& rng) const override;
  nlohmann::json descriptor() const override;
  std::vector<std::string> coordinate_names() const override { return {"ray", "offset"}; }
  std::optional<double> diameter() const override { return 2.0 * length_; }

  Point make_point(std::size_t ray, double offset) const;
  std::size_t rays() const { return rays_; }
  double length() const { return length_; }

 protected:
  double do_distance(const Point& x, const Point& y) const override;
  Point do_combine(const Point& x, const Point& y, double lambda) const override;

 private:
  std::size_t rays_;
  double length_;
};

/// The unit circle with the arc-length metric; a metric space only.
class Circle final : public MetricSpace {
 public:
  std::string kind() const override { return "circle"; }
  std::size_t dimension() const override { return 1; }
  bool contains(const Point& x) const override;
  Point sample(std::mt19937_64& rng) const override;
  nlohmann::json descriptor() const override;
  std::vector<std::string> coordinate_names() const override { return {"angle"}; }
  std::optional<double> diameter() const override;

 protected:
  double do_distance(const Point& x, const Point& y) const override;
};

/// Demonstration structure: the metric of `base` with the degenerate
/// W(x, y, λ) := x, which violates (W2) whenever λ ≠ λ̃ and x ≠ y.
class BrokenW final : public HyperbolicSpace {
 public:
  explicit BrokenW(HyperbolicPtr base);
  std::string kind() const override { return "broken_w"; }
  std::size_t dimension() const override { return base_->dimension(); }
  bool contains(const Point& x) const override { return base_->contains(x); }
  Point sample(std::mt19937_64& rng) const override { return base_->sample(rng); }
  nlohmann::json descriptor() const override;
  std::vector<std::string> coordinate_names() const override { return base_->coordinate_names(); }

 protected:
  double do_distance(const Point& x, const Point& y) const override;
  Point do_combine(const Point& x, const Point&, double) const override { return x; }

 private:
  HyperbolicPtr base_;
};

std::shared_ptr<const EuclideanSpace> make_euclidean(std::size_t n);
std::shared_ptr<const Interval> make_interval(double a, double b);
std::shared_ptr<const PoincareDisk> make_poincare_disk();
std::shared_ptr<const StarTree> make_star_tree(std::size_t rays, double length);
std::shared_ptr<const Circle> make_circle();
std::shared_ptr<const BrokenW> make_broken_w(HyperbolicPtr base);

// Products ------------------------------------------------------------------

/// (C × M)∞ with d∞((x,u),(y,v)) = max{ρ(x,y), d(u,v)}. Product points store
/// the coordinates of x followed by those of u.
class ProductSpace : public MetricSpace {
 public:
  ProductSpace(SpacePtr left, SpacePtr right);

  std::string kind() const override { return "product"; }
  std::size_t dimension() const override;
  bool contains(const Point& p) const override;
  Point sample(std::mt19937_64& rng) const override;
  nlohmann::json descriptor() const override;
  std::vector<std::string> coordinate_names() const override;

  const SpacePtr& left() const { return left_; }
  const SpacePtr& right() const { return right_; }

  Point join(const Point& x, const Point& u) const;
  Point first(const Point& p) const;
  Point second(const Point& p) const;
  std::pair<Point, Point> split(const Point& p) const;

  /// The convex set in which the first coordinate lives when the second
  /// is u: C itself for a plain product, C_u for a family.
  virtual HyperbolicPtr fiber(const Point& u) const;

  bool contains_pair(const Point& x, const Point& u) const;

 protected:
  double do_distance(const Point& p, const Point& q) const override;

 private:
  SpacePtr left_;
  SpacePtr right_;
};

using ProductPtr = std::shared_ptr<const ProductSpace>;

std::shared_ptr<const ProductSpace> product(SpacePtr c, SpacePtr m);

// Axiom verification ----------------------------------------------------------

struct AxiomResult {
  std::string name;
  double max_violation = 0.0;
  std::size_t checked = 0;
  std::optional<std::string> counterexample;  // first tuple exceeding η
  bool passed = true;
};

struct AxiomReport {
  std::string space_kind;
  double eta = kDefaultEta;
  std::vector<AxiomResult> results;

  bool passed() const;
  const AxiomResult* find(const std::string& name) const;
  nlohmann::json to_json() const;
};

/// Metric axioms (identity, symmetry, triangle inequality) on sampled triples.
AxiomReport check_metric_axioms(const MetricSpace& s, std::size_t samples, std::uint64_t seed,
                                double eta);

/// Metric axioms plus (W1)–(W4) and the endpoint identities W(x,y,0) = x,
/// W(x,y,1) = y on sampled tuples and λ values.
AxiomReport check_axioms(const HyperbolicSpace& s, std::size_t samples, std::uint64_t seed,
                         double eta);

// Descriptors ---------------------------------------------------------------

/// Builds a space from {"kind": ..., parameters}. Infinite interval ends are
/// written as the strings "inf" / "-inf". Raises ConfigError.
SpacePtr space_from_json(const nlohmann::json& j);
HyperbolicPtr hyperbolic_space_from_json(const nlohmann::json& j);

}  // namespace kmfp
