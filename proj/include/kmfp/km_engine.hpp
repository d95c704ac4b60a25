#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kmfp/alpha.hpp"
#include "kmfp/maps.hpp"
#include "kmfp/numeric.hpp"
#include "kmfp/spaces.hpp"

namespace kmfp {

/// Step sizes (λₙ) in [0,1) together with the witnesses K and α that make
/// (λₙ) bounded away from 1 and divergent in sum:
///   λₙ ≤ 1 − 1/K   and   n ≤ Σ_{i=0}^{α(n)} λᵢ.
/// Step sizes are exact rationals; they are turned into doubles only when a
/// step is taken.
class Schedule {
 public:
  using LambdaFn = std::function<Rational(std::size_t)>;

  /// λₙ ≡ value.
  static Schedule constant(Rational value, std::uint64_t K, AlphaFunction alpha);
  /// λₙ = 1/(n + shift).
  static Schedule inverse_shift(std::uint64_t shift, std::uint64_t K, AlphaFunction alpha);
  /// λₙ = values[n] for n < size, `tail` afterwards.
  static Schedule tabulated(std::vector<Rational> values, Rational tail, std::uint64_t K,
                            AlphaFunction alpha);
  /// Arbitrary step sizes; partial sums are accumulated term by term.
  static Schedule custom(LambdaFn lambda, std::uint64_t K, AlphaFunction alpha, std::string label);

  Rational lambda_exact(std::size_t n) const;
  double lambda(std::size_t n) const;
  /// Σ_{i<count} λᵢ, exact.
  Rational partial_sum(std::size_t count) const;

  std::uint64_t K() const { return K_; }
  const AlphaFunction& alpha() const { return alpha_; }
  std::string label() const { return label_; }
  nlohmann::json descriptor() const;

 private:
  enum class Kind { constant, inverse_shift, tabulated, custom };
  Schedule(Kind kind, std::uint64_t K, AlphaFunction alpha);

  Kind kind_;
  std::uint64_t K_;
  AlphaFunction alpha_;
  Rational constant_ = 0;
  double constant_double_ = 0.0;
  std::uint64_t shift_ = 0;
  std::vector<Rational> table_;
  Rational tail_ = 0;
  LambdaFn custom_;
  std::string label_;
};

/// {"lambda": {"kind":"constant","value":"1/2"} | {"kind":"inverse_shift","shift":2}
///            | {"kind":"tabulated","values":[...],"tail":"1/2"},
///  "K": 2, "alpha": {...}}
Schedule schedule_from_json(const nlohmann::json& j);

struct ScheduleValidation {
  bool valid = true;
  std::size_t horizon = 0;
  std::optional<std::size_t> first_violation;
  std::string clause;  // "lambda-range", "bounded-away-from-one" or "divergence"
  std::string detail;
};

/// Checks both clauses of the step-size hypothesis for every n ≤ horizon,
/// in exact arithmetic, and reports the first violation. Nothing is claimed
/// beyond the horizon.
ScheduleValidation validate_schedule(const Schedule& sched, std::size_t horizon);

struct ResidualTrace {
  std::vector<Point> points;      // x₀ … x_N
  std::vector<double> residuals;  // ρ(xₙ, T(xₙ))
};

/// Krasnoselski–Mann iteration x_{n+1} = (1−λₙ)xₙ ⊕ λₙT(xₙ) for N steps.
/// Raises DomainError naming the step if T(xₙ) or x_{n+1} leaves S.
ResidualTrace km_iterate(const HyperbolicSpace& s, const NonexpansiveMap& t, const Point& x0,
                         const Schedule& sched, std::size_t steps);

/// The N-th iterate only, without recording the trace.
Point km_point(const HyperbolicSpace& s, const NonexpansiveMap& t, const Point& x0,
               const Schedule& sched, std::size_t steps);

/// Last residual of a length-N trace: an upper estimate of r_C(T) that is
/// nonincreasing in N.
double estimate_residual_inf(const HyperbolicSpace& s, const NonexpansiveMap& t, const Point& x0,
                             const Schedule& sched, std::size_t steps);

/// CSV with header `n,residual,<coordinate names>`, 17 significant digits.
void write_trace_csv(std::ostream& out, const MetricSpace& s, const ResidualTrace& trace);

}  // namespace kmfp
