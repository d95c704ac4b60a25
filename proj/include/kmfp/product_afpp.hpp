#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "kmfp/big_count.hpp"
#include "kmfp/km_engine.hpp"
#include "kmfp/maps.hpp"
#include "kmfp/oracles.hpp"
#include "kmfp/spaces.hpp"

namespace kmfp {

/// H = {(x,u) : u ∈ M, x ∈ C_u} ⊆ (X × M)∞ for a family of convex subsets
/// C_u of an ambient hyperbolic space X.
class FamilyProduct final : public ProductSpace {
 public:
  using FiberFn = std::function<HyperbolicPtr(const Point& u)>;

  FamilyProduct(HyperbolicPtr ambient, SpacePtr m, FiberFn c_of, nlohmann::json fibers);

  std::string kind() const override { return "family"; }
  HyperbolicPtr fiber(const Point& u) const override;
  Point sample(std::mt19937_64& rng) const override;
  nlohmann::json descriptor() const override;

 private:
  FiberFn c_of_;
  nlohmann::json fibers_;
};

/// Builds the family and checks δ(u) ∈ C_u on `samples` sampled u; raises
/// PreconditionError naming the first u that fails.
std::shared_ptr<const FamilyProduct> family_product(HyperbolicPtr ambient, SpacePtr m,
                                                    FamilyProduct::FiberFn c_of,
                                                    nlohmann::json fibers,
                                                    const SelectionFunction& delta,
                                                    std::size_t samples, std::uint64_t seed);

struct InvarianceReport {
  bool passed = true;
  std::size_t checked = 0;
  std::string clause;  // "P1T(x,u) in C_u" or "P2T(x,u) in M"
  std::optional<Point> x;
  std::optional<Point> u;
  std::optional<Point> image;
  nlohmann::json to_json() const;
};

/// Checks (P₁∘T)(x,u) ∈ C_u and (P₂∘T)(x,u) ∈ M on sampled (x,u) ∈ H and on
/// the given extra pairs.
InvarianceReport check_family_invariance(const ProductMap& t, std::size_t samples,
                                         std::uint64_t seed,
                                         const std::vector<std::pair<Point, Point>>& extra = {});

struct ProductProblem {
  ProductMap map;
  SelectionFunction delta;
  Schedule schedule;
  OraclePtr oracle;
  double eta = kDefaultEta;
};

/// One element of the sequence: z ε-fixed for φₙ with ε = 1/n, x = (δ(z))ₙ.
struct ApproxStep {
  std::size_t n = 0;
  Point z;
  Point x;
  double residual = 0.0;        // d∞((x,z), T(x,z))
  double slice_residual = 0.0;  // ρ(x, T_z(x))
};

/// Raises ArgumentError for n = 0, OracleFailure from the oracle, and
/// InvariantFailure if residual > max{slice residual, 1/n} + η.
ApproxStep approx_fixed_sequence(const ProductProblem& problem, std::size_t n);

/// Per-parameter approximate fixed point x* of T_u.
using Probe = std::function<Point(const Point& u)>;

struct Certificate {
  Point x;
  Point u;
  double residual = 0.0;
  Rational epsilon;  // the ε this run was made for
  double target = 0.0;
  std::size_t n_used = 0;
  std::optional<BigCount> bound_used;
  bool budget_truncated = false;
  std::string justification;
  // The run's own inequality: residual ≤ rhs, with rhs = ρ(x*,T_z x*) + ε
  // for the main lemma and ε for the bounded-orbit variant.
  double rhs = 0.0;
  bool inequality_holds = false;
  double slice_residual = 0.0;
  std::size_t round = 0;

  nlohmann::json to_json() const;
};

/// Runs the sequence at n = g(ε,b₁,b₂,K,α) when n ≤ budget, else at
/// n = budget (flagged budget-truncated; budget must be ≥ ⌈1/ε⌉+1).
/// Checks the probe contract at zₙ (PreconditionError), the intermediate
/// bound ρ(δ(z),T_z δ(z)) ≤ 2b₁+b₂, and, unless truncated, the lemma's
/// inequality (InvariantFailure). The certificate target is ρ(x*,T_z x*)+ε.
Certificate main_lemma_run(const ProductProblem& problem, const Rational& b1, const Rational& b2,
                           const Rational& epsilon, const Probe& probe, std::uint64_t budget);

/// sup_u r_C(T_u) ≤ sup_rc together with a radius φ(ε) and a probe with
/// ρ(δ(u),x*) ≤ φ(ε) and ρ(x*,T_u x*) ≤ sup_rc + ε.
struct SupDisplacementHypothesis {
  Rational sup_rc = 0;
  std::function<Rational(const Rational& eps)> radius;
  std::function<Point(const Point& u, const Rational& eps)> probe;
};

/// For every u some y with ρ(δ(u),y) ≤ b whose KM orbit under T_u has
/// diameter ≤ b. `start` gives y (default δ(u)); checked on sampled u.
struct BoundedOrbitHypothesis {
  Rational b = 1;
  std::optional<SelectionFunction> start;
  std::size_t samples = 16;
  std::uint64_t seed = 0;
};

using Hypothesis = std::variant<SupDisplacementHypothesis, BoundedOrbitHypothesis>;

struct SolveResult {
  std::optional<Certificate> certificate;  // set iff residual ≤ target
  Certificate best;                        // lowest residual seen
  std::size_t rounds = 0;
  bool exhausted = false;
  std::string diagnostic;
};

/// Rounds k = 0, 1, … with ε_k = ε/2^k until a run reaches the target
/// (sup_rc + ε, resp. ε) or the budget forces truncation without success.
SolveResult solve_product_afpp(const ProductProblem& problem, const Rational& epsilon,
                               const Hypothesis& hypothesis, std::uint64_t budget,
                               std::size_t max_rounds = 6);

struct DisplacementReport {
  double bound = 0.0;
  std::size_t checked = 0;
  double max_displacement = 0.0;
  bool passed = true;
  std::optional<Point> u;  // first u with ρ(T_u(δ(u)), δ(u)) > b
  nlohmann::json to_json() const;
};

/// Samples u ∈ M and checks ρ(T_u(δ(u)), δ(u)) ≤ b within η.
DisplacementReport check_uniform_displacement(const ProductMap& t, const SelectionFunction& delta,
                                              double b, std::size_t samples, std::uint64_t seed,
                                              double eta = kDefaultEta);

/// min over 1 ≤ n ≤ N of the sequence residuals, an upper estimate of r_H(T).
double estimate_rH(const ProductProblem& problem, std::size_t n_max);

}  // namespace kmfp
