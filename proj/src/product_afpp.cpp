#include "kmfp/product_afpp.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "kmfp/errors.hpp"
#include "kmfp/rates.hpp"

namespace kmfp {

// Family products ----------------------------------------------------------------

FamilyProduct::FamilyProduct(HyperbolicPtr ambient, SpacePtr m, FiberFn c_of, nlohmann::json fibers)
    : ProductSpace(std::move(ambient), std::move(m)), c_of_(std::move(c_of)), fibers_(std::move(fibers)) {
  if (!c_of_) throw ArgumentError("family product: missing fiber function");
}

HyperbolicPtr FamilyProduct::fiber(const Point& u) const {
  auto c = c_of_(u);
  if (!c || c->dimension() != left()->dimension()) {
    throw ArgumentError("family product: fiber at " + to_string(u) + " does not fit the ambient space");
  }
  return c;
}

Point FamilyProduct::sample(std::mt19937_64& rng) const {
  const Point u = right()->sample(rng);
  return join(fiber(u)->sample(rng), u);
}

nlohmann::json FamilyProduct::descriptor() const {
  return {{"kind", "family"},
          {"ambient", left()->descriptor()},
          {"M", right()->descriptor()},
          {"fibers", fibers_}};
}

std::shared_ptr<const FamilyProduct> family_product(HyperbolicPtr ambient, SpacePtr m,
                                                    FamilyProduct::FiberFn c_of,
                                                    nlohmann::json fibers,
                                                    const SelectionFunction& delta,
                                                    std::size_t samples, std::uint64_t seed) {
  auto family = std::make_shared<const FamilyProduct>(std::move(ambient), m, std::move(c_of),
                                                      std::move(fibers));
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < samples; ++i) {
    const Point u = m->sample(rng);
    const Point d = delta(u);
    if (!family->fiber(u)->contains(d)) {
      throw PreconditionError(fmt::format("selection {} puts {} at {}, outside C_u", delta.label(),
                                          to_string(u), to_string(d)));
    }
  }
  return family;
}

nlohmann::json InvarianceReport::to_json() const {
  nlohmann::json j{{"passed", passed}, {"checked", checked}};
  if (!passed) {
    j["clause"] = clause;
    j["x"] = point_to_json(*x);
    j["u"] = point_to_json(*u);
    j["image"] = point_to_json(*image);
  }
  return j;
}

InvarianceReport check_family_invariance(const ProductMap& t, std::size_t samples,
                                         std::uint64_t seed,
                                         const std::vector<std::pair<Point, Point>>& extra) {
  const auto& h = *t.domain();
  InvarianceReport report;
  const auto check = [&](const Point& x, const Point& u) {
    ++report.checked;
    const auto [tx, tu] = t(x, u);
    const char* clause = nullptr;
    Point image;
    if (!h.fiber(u)->contains(tx)) {
      clause = "P1T(x,u) in C_u";
      image = tx;
    } else if (!h.right()->contains(tu)) {
      clause = "P2T(x,u) in M";
      image = tu;
    }
    if (!clause) return false;
    report.passed = false;
    report.clause = clause;
    report.x = x;
    report.u = u;
    report.image = image;
    return true;
  };
  for (const auto& [x, u] : extra) {
    if (check(x, u)) return report;
  }
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < samples; ++i) {
    const auto [x, u] = h.split(h.sample(rng));
    if (check(x, u)) return report;
  }
  return report;
}

// The sequence (z_n) --------------------------------------------------------------

ApproxStep approx_fixed_sequence(const ProductProblem& problem, std::size_t n) {
  if (n == 0) throw ArgumentError("approx_fixed_sequence: n must be at least 1 (tolerance 1/n)");
  const auto& t = problem.map;
  const auto& h = *t.domain();
  const double tol = 1.0 / static_cast<double>(n);

  ApproxStep step;
  step.n = n;
  step.z = problem.oracle->solve(phi(t, problem.delta, problem.schedule, n), tol);
  const auto c = h.fiber(step.z);
  step.x = km_point(*c, slice(t, step.z), problem.delta(step.z), problem.schedule, n);

  const auto [tx, tz] = t(step.x, step.z);
  step.slice_residual = h.left()->distance(step.x, tx);
  step.residual = h.distance(h.join(step.x, step.z), h.join(tx, tz));
  if (step.residual > std::max(step.slice_residual, tol) + problem.eta) {
    throw InvariantFailure(fmt::format(
        "n={}: residual {} exceeds max(slice residual {}, 1/n)", n, format_real(step.residual),
        format_real(step.slice_residual)));
  }
  return step;
}

namespace {

struct RunLength {
  std::size_t n;
  bool truncated;
};

RunLength choose_n(const BigCount& bound, const Rational& epsilon, std::uint64_t budget) {
  if (bound.at_most(BigInt(budget))) return {bound.value().convert_to<std::size_t>(), false};
  const BigInt floor_n = reciprocal_floor(epsilon);
  if (floor_n > budget) {
    throw ArgumentError(fmt::format("budget {} is below ceil(1/eps)+1 = {}", budget, floor_n.str()));
  }
  return {static_cast<std::size_t>(budget), true};
}

Certificate certificate_from(const ApproxStep& step, const Rational& epsilon, const BigCount& bound,
                             bool truncated) {
  Certificate cert;
  cert.x = step.x;
  cert.u = step.z;
  cert.residual = step.residual;
  cert.slice_residual = step.slice_residual;
  cert.epsilon = epsilon;
  cert.n_used = step.n;
  cert.bound_used = bound;
  cert.budget_truncated = truncated;
  cert.target = to_double(epsilon);
  return cert;
}

void check_orbit(const ProductProblem& problem, const BoundedOrbitHypothesis& hyp, const Point& u,
                 std::size_t length) {
  const auto& h = *problem.map.domain();
  const auto c = h.fiber(u);
  const double b = to_double(hyp.b);
  const Point d = problem.delta(u);
  const Point y = hyp.start ? (*hyp.start)(u) : d;
  if (!c->contains(y)) {
    throw PreconditionError("orbit start for u=" + to_string(u) + " is outside C_u");
  }
  if (c->distance(d, y) > b + problem.eta) {
    throw PreconditionError(fmt::format("u={}: rho(delta(u), y) = {} exceeds b = {}", to_string(u),
                                        format_real(c->distance(d, y)), hyp.b.str()));
  }
  const auto orbit = km_iterate(*c, slice(problem.map, u), y, problem.schedule, length).points;
  double diameter = 0.0;
  for (std::size_t i = 0; i < orbit.size(); ++i) {
    for (std::size_t j = i + 1; j < orbit.size(); ++j) {
      diameter = std::max(diameter, c->distance(orbit[i], orbit[j]));
    }
  }
  if (diameter > b + problem.eta) {
    throw PreconditionError(fmt::format("u={}: KM orbit diameter {} over {} steps exceeds b = {}",
                                        to_string(u), format_real(diameter), length, hyp.b.str()));
  }
}

}  // namespace

Certificate main_lemma_run(const ProductProblem& problem, const Rational& b1, const Rational& b2,
                           const Rational& epsilon, const Probe& probe, std::uint64_t budget) {
  const auto& sched = problem.schedule;
  const BigCount bound = rate_product(epsilon, b1, b2, sched.K(), sched.alpha());
  const auto [n, truncated] = choose_n(bound, epsilon, budget);
  const ApproxStep step = approx_fixed_sequence(problem, n);

  const auto& z = step.z;
  const auto c = problem.map.domain()->fiber(z);
  const auto tz = slice(problem.map, z);
  const Point d = problem.delta(z);
  const Point x_star = probe(z);
  if (!c->contains(x_star)) {
    throw PreconditionError("probe at u=" + to_string(z) + " left C_u: " + to_string(x_star));
  }
  const double eta = problem.eta;
  const double to_star = c->distance(d, x_star);
  const double star_residual = c->distance(x_star, tz(x_star));
  if (to_star > to_double(b1) + eta || star_residual > to_double(b2) + eta) {
    throw PreconditionError(fmt::format(
        "probe at u={}: rho(delta(u),x*) = {} (b1 = {}), rho(x*,T_u x*) = {} (b2 = {})",
        to_string(z), format_real(to_star), b1.str(), format_real(star_residual), b2.str()));
  }
  const double start_residual = c->distance(d, tz(d));
  if (start_residual > to_double(2 * b1 + b2) + eta) {
    throw InvariantFailure(fmt::format("u={}: rho(delta(u),T_u delta(u)) = {} > 2b1+b2",
                                       to_string(z), format_real(start_residual)));
  }

  Certificate cert = certificate_from(step, epsilon, bound, truncated);
  cert.rhs = star_residual + to_double(epsilon);
  cert.inequality_holds = step.residual <= cert.rhs + eta;
  cert.target = cert.rhs;
  cert.justification = "main-lemma";
  if (!truncated && !cert.inequality_holds) {
    throw InvariantFailure(fmt::format("n={} >= g but residual {} > rho(x*,T x*) + eps = {}", n,
                                       format_real(step.residual), format_real(cert.rhs)));
  }
  return cert;
}

namespace {

Certificate bounded_orbit_run(const ProductProblem& problem, const BoundedOrbitHypothesis& hyp,
                              const Rational& epsilon, std::uint64_t budget) {
  const auto& sched = problem.schedule;
  const BigCount bound = rate_product_ishikawa(epsilon, hyp.b, sched.K(), sched.alpha());
  const auto [n, truncated] = choose_n(bound, epsilon, budget);
  const ApproxStep step = approx_fixed_sequence(problem, n);
  check_orbit(problem, hyp, step.z, std::min<std::size_t>(budget, 256));

  Certificate cert = certificate_from(step, epsilon, bound, truncated);
  cert.rhs = to_double(epsilon);
  cert.inequality_holds = step.residual <= cert.rhs + problem.eta;
  cert.justification = "bounded-orbit";
  if (!truncated && (step.slice_residual > cert.rhs + problem.eta || !cert.inequality_holds)) {
    throw InvariantFailure(fmt::format("n={} >= g~ but residual {} (slice {}) > eps = {}", n,
                                       format_real(step.residual), format_real(step.slice_residual),
                                       epsilon.str()));
  }
  return cert;
}

}  // namespace

SolveResult solve_product_afpp(const ProductProblem& problem, const Rational& epsilon,
                               const Hypothesis& hypothesis, std::uint64_t budget,
                               std::size_t max_rounds) {
  if (epsilon <= 0) throw ArgumentError("solve_product_afpp: epsilon must be positive");
  if (max_rounds == 0) throw ArgumentError("solve_product_afpp: need at least one round");
  const auto* sup = std::get_if<SupDisplacementHypothesis>(&hypothesis);
  const auto* orbit = std::get_if<BoundedOrbitHypothesis>(&hypothesis);
  if (sup && (!sup->radius || !sup->probe)) {
    throw ArgumentError("sup-displacement hypothesis needs a radius and a probe");
  }
  if (orbit) {
    std::mt19937_64 rng(orbit->seed);
    const auto& m = *problem.map.domain()->right();
    for (std::size_t i = 0; i < orbit->samples; ++i) {
      check_orbit(problem, *orbit, m.sample(rng), std::min<std::size_t>(budget, 256));
    }
  }
  const double target = to_double(sup ? sup->sup_rc + epsilon : epsilon);

  SolveResult result;
  Rational eps_k = epsilon;
  for (std::size_t k = 0; k < max_rounds; ++k, eps_k /= 2) {
    Certificate cert;
    if (sup) {
      const Rational b1 = sup->radius(eps_k);
      const auto probe = [&](const Point& u) { return sup->probe(u, eps_k); };
      cert = main_lemma_run(problem, b1, sup->sup_rc + eps_k, eps_k, probe, budget);
      cert.justification = "sup-slice-displacement";
    } else {
      cert = bounded_orbit_run(problem, *orbit, eps_k, budget);
    }
    cert.round = k;
    cert.target = target;

    // Recomputed from scratch at emission.
    const auto& h = *problem.map.domain();
    const Point p = h.join(cert.x, cert.u);
    cert.residual = h.distance(p, problem.map.apply(p));

    result.rounds = k + 1;
    if (k == 0 || cert.residual < result.best.residual) result.best = cert;
    if (cert.residual <= target) {
      result.certificate = cert;
      return result;
    }
    if (cert.budget_truncated) break;
  }
  result.exhausted = true;
  result.diagnostic = fmt::format("no residual <= {} within budget {}; best {} at n = {}",
                                  format_real(target), budget, format_real(result.best.residual),
                                  result.best.n_used);
  return result;
}

double estimate_rH(const ProductProblem& problem, std::size_t n_max) {
  if (n_max == 0) throw ArgumentError("estimate_rH: need N >= 1");
  double best = INFINITY;
  for (std::size_t n = 1; n <= n_max; ++n) {
    best = std::min(best, approx_fixed_sequence(problem, n).residual);
  }
  return best;
}

nlohmann::json Certificate::to_json() const {
  return {{"point", {{"x", point_to_json(x)}, {"u", point_to_json(u)}}},
          {"residual", format_real(residual)},
          {"epsilon", epsilon.str()},
          {"epsilon_target", format_real(target)},
          {"n_used", n_used},
          {"bound_used", bound_used ? bound_used->to_json() : nlohmann::json(nullptr)},
          {"budget_truncated", budget_truncated},
          {"justification", justification},
          {"inequality", {{"rhs", format_real(rhs)}, {"holds", inequality_holds}}},
          {"slice_residual", format_real(slice_residual)},
          {"round", round}};
}

nlohmann::json DisplacementReport::to_json() const {
  nlohmann::json j = {{"passed", passed},
                      {"checked", checked},
                      {"bound", format_real(bound)},
                      {"max_displacement", format_real(max_displacement)}};
  if (u) j["u"] = point_to_json(*u);
  return j;
}

DisplacementReport check_uniform_displacement(const ProductMap& t, const SelectionFunction& delta,
                                              double b, std::size_t samples, std::uint64_t seed,
                                              double eta) {
  DisplacementReport report;
  report.bound = b;
  std::mt19937_64 rng(seed);
  const auto& h = *t.domain();
  for (std::size_t k = 0; k < samples; ++k) {
    const Point u = h.right()->sample(rng);
    const Point y = delta(u);
    const double d = h.fiber(u)->distance(y, slice(t, u)(y));
    ++report.checked;
    report.max_displacement = std::max(report.max_displacement, d);
    if (d > b + eta && report.passed) {
      report.passed = false;
      report.u = u;
    }
  }
  return report;
}

}  // namespace kmfp
