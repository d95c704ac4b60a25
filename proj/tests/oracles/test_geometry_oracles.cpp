#include <doctest.h>

#include <cmath>

#include "kmfp/spaces.hpp"
#include "support/gen.hpp"

using namespace kmfp;

namespace {

// Composite Simpson for the radial density 2/(1−r²).
double poincare_radial_length(double r) {
  const int n = 20000;
  const double h = r / n;
  const auto f = [](double t) { return 2.0 / (1.0 - t * t); };
  double s = f(0) + f(r);
  for (int i = 1; i < n; ++i) s += f(i * h) * (i % 2 ? 4 : 2);
  return s * h / 3;
}

double poincare_arcosh(const Point& z, const Point& w) {
  const double dx = z[0] - w[0], dy = z[1] - w[1];
  const double nz = z[0] * z[0] + z[1] * z[1], nw = w[0] * w[0] + w[1] * w[1];
  return std::acosh(1 + 2 * (dx * dx + dy * dy) / ((1 - nz) * (1 - nw)));
}

// Star tree metric written out case by case.
double star_distance(const Point& p, const Point& q) {
  const bool hub_p = p[1] == 0.0, hub_q = q[1] == 0.0;
  if (hub_p && hub_q) return 0.0;
  if (hub_p) return q[1];
  if (hub_q) return p[1];
  if (p[0] == q[0]) return std::abs(p[1] - q[1]);
  return p[1] + q[1];
}

}  // namespace

TEST_CASE("poincare radial distance against quadrature") {
  const auto d = make_poincare_disk();
  for (double r : {0.1, 0.5, 0.8, 0.95}) {
    CHECK(d->distance(Point{0, 0}, Point{r, 0}) == doctest::Approx(poincare_radial_length(r)).epsilon(1e-10));
  }
  CHECK(poincare_radial_length(0.5) == doctest::Approx(1.0986123).epsilon(1e-7));
}

TEST_CASE("poincare distance against the cross-ratio formula") {
  const auto d = make_poincare_disk();
  gen::for_cases(41, 2000, [&](gen::Gen& g, int) {
    const Point z = g.sample(*d), w = g.sample(*d);
    CHECK(d->distance(z, w) == doctest::Approx(poincare_arcosh(z, w)).epsilon(1e-9));
  });
}

TEST_CASE("poincare geodesic points split the distance") {
  const auto d = make_poincare_disk();
  gen::for_cases(42, 2000, [&](gen::Gen& g, int) {
    const Point z = g.sample(*d), w = g.sample(*d);
    const double l = g.lambda();
    const Point m = d->convex_comb(z, w, l);
    const double total = poincare_arcosh(z, w);
    CHECK(poincare_arcosh(z, m) == doctest::Approx(l * total).epsilon(1e-7).scale(1.0));
    CHECK(poincare_arcosh(m, w) == doctest::Approx((1 - l) * total).epsilon(1e-7).scale(1.0));
  });
}

TEST_CASE("star tree against case analysis") {
  const auto t = make_star_tree(3, 2.0);
  gen::for_cases(43, 3000, [&](gen::Gen& g, int) {
    const Point p = g.sample(*t), q = g.sample(*t);
    CHECK(t->distance(p, q) == doctest::Approx(star_distance(p, q)).epsilon(1e-15));
    const double l = g.lambda();
    const Point m = t->convex_comb(p, q, l);
    CHECK(star_distance(p, m) == doctest::Approx(l * star_distance(p, q)).epsilon(1e-12).scale(1.0));
    CHECK(star_distance(m, q) == doctest::Approx((1 - l) * star_distance(p, q)).epsilon(1e-12).scale(1.0));
  });
}
