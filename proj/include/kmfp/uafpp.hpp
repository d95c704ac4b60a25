#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "kmfp/big_count.hpp"
#include "kmfp/km_engine.hpp"
#include "kmfp/maps.hpp"
#include "kmfp/spaces.hpp"

namespace kmfp {

/// Constructive ε-fixed point near x: (S, T, x, ε, b) ↦ x*.
using WitnessFn = std::function<Point(const HyperbolicSpace&, const NonexpansiveMap&, const Point&,
                                      double eps, double b)>;

/// Uniform approximate fixed point modulus: from any x with ρ(x,T x) ≤ b an
/// x* with ρ(x,x*) ≤ D(ε,b) and ρ(x*,T x*) ≤ residual_factor·ε exists.
struct UafppModulus {
  std::function<double(double eps, double b)> D_of;
  double residual_factor = 1.0;
  WitnessFn witness;  // may be empty
  std::string label;
};

/// Uniform asymptotic regularity: ρ(x,T x) ≤ b ⇒ ρ(xₙ,T xₙ) ≤ residual_factor·ε
/// for all n ≥ N(ε,b).
struct RegularityModulus {
  std::function<BigCount(double eps, double b)> N_of;
  double residual_factor = 1.0;
  std::string label;
};

/// N(ε,b) = h(ε, max{b, D(ε,b)}, K, α). Each conversion adds ε to the residual
/// guarantee (ρ(xₙ,T xₙ) ≤ ρ(x*,T x*) + ε), so the factor grows by one.
RegularityModulus uafpp_to_regularity(const UafppModulus& phi, const Schedule& sched);

/// D(ε,b) = b·Σ_{i<N} λᵢ with N = N(ε,b); the witness is x_N. When N is too
/// large to sum, D falls back to b·N (still a radius since λᵢ ≤ 1), and to
/// +inf when N is only known by magnitude. The witness runs at most
/// `step_cap` KM steps; a capped witness stays within D but its residual is
/// no longer guaranteed.
UafppModulus regularity_to_uafpp(const RegularityModulus& r, const Schedule& sched,
                                 std::uint64_t step_cap);

/// D = b/(1−k) for k-contractions.
double banach_ufpp_modulus(double k, double b);

struct BanachResult {
  Point point;
  std::size_t iterations = 0;
  double residual = 0.0;             // ρ(x_out, T x_out)
  double distance_from_start = 0.0;  // ρ(x, x_out)
  double radius = 0.0;               // ρ(x,T x)/(1−k)
  bool certified = false;            // distance_from_start ≤ radius + η
};

/// Picard iteration until ρ(xₙ,T xₙ) ≤ (1−k)·tol. Raises PreconditionError
/// when a step grows by more than the factor k (ratio test).
BanachResult banach_fixed_point(const MetricSpace& s, const NonexpansiveMap& t, const Point& x,
                                double k, double tol, std::size_t max_iter = 100000,
                                double eta = kDefaultEta);

struct GkReport {
  double bound = 0.0;  // 2D₁ + 1
  std::size_t checked = 0;
  double max_displacement = 0.0;
  bool passed = true;
  std::optional<Point> x;  // first pair with ρ(x, T x) > bound, T ≡ y
  std::optional<Point> y;
  nlohmann::json to_json() const;
};

/// If C had the uniform property with witness D₁ at ε = 1, every constant map
/// T ≡ y would satisfy ρ(x,T x) ≤ 2D₁+1. Samples pairs (x, y) plus `extra`
/// and reports the first one that breaks the bound.
GkReport gk_boundedness_check(const MetricSpace& c, double d1, std::size_t samples,
                              std::uint64_t seed,
                              const std::vector<std::pair<Point, Point>>& extra = {},
                              double eta = kDefaultEta);

struct UafppFailure {
  std::string map;
  Point x;
  Point x_star;
  double distance = 0.0;
  double residual = 0.0;
};

struct UafppCheckReport {
  bool passed = true;
  std::size_t checked = 0;
  std::size_t skipped = 0;  // starts with ρ(x,T x) > b
  double radius = 0.0;
  double tolerance = 0.0;
  std::vector<UafppFailure> failures;  // at most 10 listed
  nlohmann::json to_json() const;
};

/// For each map and `starts` sampled x with ρ(x,T x) ≤ b, takes x* from the
/// probe (or the modulus witness when the probe is empty) and checks
/// ρ(x,x*) ≤ D(ε,b) and ρ(x*,T x*) ≤ residual_factor·ε, both within η.
UafppCheckReport check_uafpp_empirically(
    const HyperbolicSpace& s, const std::vector<NonexpansiveMap>& maps, double eps, double b,
    const UafppModulus& phi,
    const std::function<Point(const NonexpansiveMap&, const Point&)>& probe, std::size_t starts,
    std::uint64_t seed, double eta = kDefaultEta);

/// Rows {eps, b, D} and {eps, b, N} for report grids.
nlohmann::json modulus_table(const UafppModulus& phi, const std::vector<double>& eps_grid,
                             const std::vector<double>& b_grid);
nlohmann::json modulus_table(const RegularityModulus& r, const std::vector<double>& eps_grid,
                             const std::vector<double>& b_grid);

}  // namespace kmfp
