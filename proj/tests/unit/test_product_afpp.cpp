#include <doctest.h>

#include "kmfp/errors.hpp"
#include "kmfp/oracles.hpp"
#include "kmfp/product_afpp.hpp"
#include "acceptance/scenarios.hpp"

using namespace kmfp;

namespace {

const auto kUnit = make_interval(0.0, 1.0);

ProductProblem constant_problem(double c, double m) {
  const auto h = product(kUnit, kUnit);
  ProductMap t(h, [c, m](const Point&, const Point&) { return std::pair{Point{c}, Point{m}}; }, "const");
  SelectionFunction zero(kUnit, kUnit, [](const Point&) { return Point{0.0}; }, "0");
  return {t, zero, scenarios::half_schedule(), std::make_shared<const AffineOracle>(kUnit)};
}

Probe identity_probe() {
  return [](const Point& u) { return u; };
}

}  // namespace

TEST_CASE("oracles") {
  const NonexpansiveMap halve(kUnit, [](const Point& x) { return Point{x[0] / 2 + 0.25}; }, "x/2+1/4");
  const GridOracle grid(kUnit);
  CHECK(std::abs(grid.solve(halve, 1e-9)[0] - 0.5) <= 2e-9);
  const AffineOracle affine(kUnit);
  CHECK(affine.solve(halve, 1e-12) == Point{0.5});
  const NonexpansiveMap bent(kUnit, [](const Point& x) { return Point{std::min(x[0] + 0.5, 1.0) * 0.5}; }, "bent");
  CHECK_THROWS_AS(affine.solve(bent, 1e-12), OracleFailure);
  const KmOracle km(kUnit, 10000, Point{0.0});
  CHECK(km.solve(halve, 1e-9)[0] == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("sequence on the diagonal") {
  const auto problem = scenarios::diagonal_problem();
  for (std::size_t n : {1u, 2u, 10u}) {
    const auto step = approx_fixed_sequence(problem, n);
    CHECK(step.residual == 0.0);
    CHECK(step.x == step.z);
  }
  CHECK_THROWS_AS(approx_fixed_sequence(problem, 0), ArgumentError);
}

TEST_CASE("sequence for a constant map") {
  const auto step = approx_fixed_sequence(constant_problem(1.0, 0.5), 5);
  CHECK(step.z == Point{0.5});
  CHECK(step.x[0] == 0.96875);
  CHECK(step.residual == 0.03125);
  CHECK(step.slice_residual == 0.03125);
}

TEST_CASE("main lemma on the diagonal") {
  const auto cert = main_lemma_run(scenarios::diagonal_problem(), Rational(1, 2), Rational(1, 2),
                                   Rational(1, 100), identity_probe(), 300);
  CHECK(cert.residual == 0.0);
  CHECK(cert.inequality_holds);
  CHECK(cert.budget_truncated);
  CHECK(cert.n_used == 300);
  CHECK(cert.justification == "main-lemma");
}

TEST_CASE("main lemma with an affordable bound") {
  const auto cert = main_lemma_run(scenarios::diagonal_problem(), Rational(1, 100), Rational(1, 100), 4,
                                   identity_probe(), 1000);
  CHECK_FALSE(cert.budget_truncated);
  CHECK(cert.n_used == 45);
  REQUIRE(cert.bound_used.has_value());
  CHECK(cert.bound_used->value() == 45);
}

TEST_CASE("main lemma on the clamped example") {
  const Probe zero = [](const Point&) { return Point{0.0}; };
  const auto cert = main_lemma_run(scenarios::clamped_problem(), 5, Rational(1, 1000000000),
                                   Rational(1, 10), zero, 200);
  CHECK(cert.residual <= 0.1);
  CHECK(cert.inequality_holds);
}

TEST_CASE("main lemma rejects a bad probe and a tiny budget") {
  const Probe far = [](const Point&) { return Point{0.0}; };
  CHECK_THROWS_AS(main_lemma_run(scenarios::diagonal_problem(), Rational(1, 10), Rational(1, 10),
                                 Rational(1, 10), [](const Point& u) { return Point{u[0] > 0.5 ? 0.0 : 1.0}; },
                                 100),
                  PreconditionError);
  CHECK_THROWS_AS(main_lemma_run(scenarios::diagonal_problem(), 1, 1, Rational(1, 100), far, 50),
                  ArgumentError);
}

TEST_CASE("solver modes") {
  const auto diag = solve_product_afpp(scenarios::diagonal_problem(), Rational(1, 100),
                                       BoundedOrbitHypothesis{1, {}, 8, 1}, 400);
  REQUIRE(diag.certificate.has_value());
  CHECK(diag.certificate->residual <= 0.01);
  CHECK(diag.certificate->justification == "bounded-orbit");
  CHECK_FALSE(diag.exhausted);

  const auto shift = scenarios::translation_problem();
  SupDisplacementHypothesis sup;
  sup.sup_rc = 1;
  sup.radius = [](const Rational&) { return Rational(1); };
  sup.probe = [d = shift.delta](const Point& u, const Rational&) { return d(u); };
  const auto trans = solve_product_afpp(shift, Rational(1, 10), sup, 60);
  REQUIRE(trans.certificate.has_value());
  CHECK(trans.certificate->justification == "sup-slice-displacement");
  CHECK(trans.certificate->residual <= 1.1);
}

TEST_CASE("budget exhaustion reports the best residual") {
  auto problem = scenarios::clamped_problem();
  problem.schedule = Schedule::constant(Rational(1, 100), 2, AlphaFunction::linear(100));
  const auto r = solve_product_afpp(problem, Rational(1, 100), BoundedOrbitHypothesis{5, {}, 4, 1}, 120);
  CHECK_FALSE(r.certificate.has_value());
  CHECK(r.exhausted);
  CHECK(r.best.residual == 1.0);
  CHECK_FALSE(r.diagnostic.empty());
}

TEST_CASE("orbit hypothesis is checked") {
  // Orbits in the translation example are unbounded.
  const auto r = [] {
    return solve_product_afpp(scenarios::translation_problem(), Rational(1, 10),
                              BoundedOrbitHypothesis{1, {}, 4, 1}, 60);
  };
  CHECK_THROWS_AS(r(), PreconditionError);
}

TEST_CASE("estimate_rH") {
  CHECK(estimate_rH(scenarios::diagonal_problem(), 1) == 0.0);
  CHECK(estimate_rH(scenarios::translation_problem(), 1) == 1.0);
  CHECK(estimate_rH(scenarios::translation_problem(), 20) == 1.0);
}

TEST_CASE("families") {
  const auto ambient = make_interval(-INFINITY, INFINITY);
  SelectionFunction zero(kUnit, ambient, [](const Point&) { return Point{0.0}; }, "0");
  const auto fiber = [](const Point& u) -> HyperbolicPtr { return make_interval(0.0, 1.0 + u[0]); };
  const auto h = family_product(ambient, kUnit, fiber, {{"kind", "test"}}, zero, 50, 1);
  CHECK(h->contains_pair(Point{1.5}, Point{0.6}));
  CHECK_FALSE(h->contains_pair(Point{1.5}, Point{0.1}));
  CHECK(h->distance(h->join(Point{1.5}, Point{0.6}), h->join(Point{0.0}, Point{0.1})) == 1.5);

  const ProductMap inward(h, [](const Point& x, const Point& u) {
    return std::pair{Point{std::min(x[0], 1 + u[0]) / 2}, u};
  }, "inward");
  CHECK(check_family_invariance(inward, 500, 2).passed);

  const ProductMap outward(h, [](const Point& x, const Point& u) { return std::pair{Point{x[0] + u[0]}, u}; },
                           "outward");
  const auto report = check_family_invariance(outward, 0, 2, {{Point{1.05}, Point{0.1}}});
  CHECK_FALSE(report.passed);
  CHECK(report.clause == "P1T(x,u) in C_u");

  SelectionFunction bad(kUnit, ambient, [](const Point&) { return Point{3.0}; }, "3");
  CHECK_THROWS_AS(family_product(ambient, kUnit, fiber, {}, bad, 10, 1), PreconditionError);
}

TEST_CASE("uniform displacement") {
  const auto diag = scenarios::diagonal_problem();
  const auto r = check_uniform_displacement(diag.map, diag.delta, 1e-12, 200, 3);
  CHECK(r.passed);
  CHECK(r.max_displacement == 0.0);
  const auto shift = scenarios::translation_problem();
  const auto bad = check_uniform_displacement(shift.map, shift.delta, 0.5, 20, 3);
  CHECK_FALSE(bad.passed);
  CHECK(bad.u.has_value());
}

TEST_CASE("certificate JSON") {
  const auto r = solve_product_afpp(scenarios::diagonal_problem(), Rational(1, 10),
                                    BoundedOrbitHypothesis{1, {}, 4, 1}, 50);
  REQUIRE(r.certificate.has_value());
  const auto j = r.certificate->to_json();
  for (const char* key : {"point", "residual", "epsilon", "epsilon_target", "n_used", "bound_used", "justification"})
    CHECK(j.contains(key));
  CHECK(j["residual"] == "0");
}
