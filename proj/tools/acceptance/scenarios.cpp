#include "scenarios.hpp"

#include <algorithm>
#include <cmath>

#include "kmfp/catalog.hpp"
#include "kmfp/oracles.hpp"

namespace kmfp::scenarios {

namespace {

std::shared_ptr<const Interval> unit() { return make_interval(0.0, 1.0); }

double spectral_norm(const Affine2& f) {
  // Largest singular value of a 2x2 matrix in closed form.
  const auto& a = f.a;
  const double p = a[0][0] * a[0][0] + a[0][1] * a[0][1] + a[1][0] * a[1][0] + a[1][1] * a[1][1];
  const double det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
  const double disc = std::sqrt(std::max(0.0, p * p / 4.0 - det * det));
  return std::sqrt(p / 2.0 + disc);
}

}  // namespace

Schedule half_schedule() { return Schedule::constant(Rational(1, 2), 2, AlphaFunction::linear(2)); }

ProductProblem diagonal_problem() {
  const auto h = product(unit(), unit());
  const auto map = product_map_from_json({{"kind", "diagonal_average"}}, h);
  const auto delta = selection_from_json({{"kind", "identity"}}, h->right(), h->left());
  return {map, delta, half_schedule(), std::make_shared<const GridOracle>(unit())};
}

ProductProblem translation_problem() {
  const auto h = product(make_interval(-INFINITY, INFINITY), unit());
  const auto map = product_map_from_json(
      {{"kind", "affine_mix"}, {"a", 1}, {"c", 1}, {"e", -1}, {"f", 1}}, h);
  const auto delta = selection_from_json({{"kind", "identity"}}, h->right(), h->left());
  return {map, delta, half_schedule(), std::make_shared<const GridOracle>(unit())};
}

ProductProblem clamped_problem() {
  const auto h = product(make_interval(0.0, 10.0), unit());
  const auto map = product_map_from_json(
      {{"kind", "coordinatewise"},
       {"first", {{"kind", "clamped_translate"}, {"shift", -1}, {"lo", 0}}},
       {"second", {{"kind", "identity"}}}},
      h);
  const auto delta = selection_from_json({{"kind", "constant"}, {"point", 5}}, h->right(), h->left());
  return {map, delta, half_schedule(), std::make_shared<const GridOracle>(unit())};
}

ProductProblem diagonal_family_problem() {
  const nlohmann::json selection = {{"kind", "identity"}};
  const auto h = product_space_from_json(
      {{"kind", "family"},
       {"ambient", {{"kind", "real_line"}}},
       {"M", {{"kind", "interval"}, {"a", 0}, {"b", 1}}},
       {"fibers", {{"kind", "constant"}, {"space", {{"kind", "interval"}, {"a", 0}, {"b", 1}}}}}},
      selection, 0);
  const auto map = product_map_from_json({{"kind", "diagonal_average"}}, h);
  const auto delta = selection_from_json(selection, h->right(), h->left());
  return {map, delta, half_schedule(), std::make_shared<const GridOracle>(unit())};
}

ProductMap escaping_family_map() {
  const nlohmann::json selection = {{"kind", "constant"}, {"point", 0}};
  const auto h = product_space_from_json(
      {{"kind", "family"},
       {"ambient", {{"kind", "real_line"}}},
       {"M", {{"kind", "interval"}, {"a", 0}, {"b", 1}}},
       {"fibers", {{"kind", "interval_family"}, {"lo", 0}, {"hi", 1}, {"hi_slope", 1}}}},
      selection, 0);
  // Not nonexpansive for d∞ (x+u has Lipschitz constant 2), so it is built by hand.
  return ProductMap(
      h, [](const Point& x, const Point& u) { return std::pair{Point{x[0] + u[0]}, u}; }, "(x+u, u)");
}

nlohmann::json diagonal_config() {
  return {{"product",
           {{"kind", "product"},
            {"C", {{"kind", "interval"}, {"a", 0}, {"b", 1}}},
            {"M", {{"kind", "interval"}, {"a", 0}, {"b", 1}}}}},
          {"map", {{"kind", "diagonal_average"}}},
          {"selection", {{"kind", "identity"}}},
          {"schedule",
           {{"lambda", {{"kind", "constant"}, {"value", "1/2"}}},
            {"K", 2},
            {"alpha", {{"kind", "linear"}, {"c", "2"}}}}},
          {"oracle", {{"kind", "grid"}}},
          {"mode", "bounded_orbit"},
          {"b", "1"},
          {"epsilon", "1/100"},
          {"budget", 400},
          {"seed", 7}};
}

Point Affine2::operator()(const Point& x) const {
  return Point{a[0][0] * x[0] + a[0][1] * x[1] + c[0], a[1][0] * x[0] + a[1][1] * x[1] + c[1]};
}

Affine2 random_square_affine(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_real_distribution<double> unit_draw(0.0, 1.0);
  Affine2 f;
  for (auto& row : f.a)
    for (double& v : row) v = coef(rng);
  const double row_max = std::max(std::abs(f.a[0][0]) + std::abs(f.a[0][1]),
                                  std::abs(f.a[1][0]) + std::abs(f.a[1][1]));
  const double scale = unit_draw(rng) / std::max({row_max, spectral_norm(f), 1e-300});
  for (auto& row : f.a)
    for (double& v : row) v *= scale;
  // Shift the image box of the square into [0,1]².
  for (int i = 0; i < 2; ++i) {
    const double lo = std::min(0.0, f.a[i][0]) + std::min(0.0, f.a[i][1]);
    const double hi = std::max(0.0, f.a[i][0]) + std::max(0.0, f.a[i][1]);
    f.c[i] = -lo + unit_draw(rng) * (1.0 - (hi - lo));
  }
  return f;
}

NonexpansiveMap as_map(const Affine2& f) {
  return NonexpansiveMap(make_euclidean(2), [f](const Point& x) { return f(x); }, "random affine");
}

Point random_square_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double x = u(rng);
  return Point{x, u(rng)};
}

ProductMap random_product_map(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_real_distribution<double> unit_draw(0.0, 1.0);
  const auto row = [&] {
    double p = coef(rng);
    double q = coef(rng);
    const double s = unit_draw(rng) / std::max(std::abs(p) + std::abs(q), 1e-300);
    p *= s;
    q *= s;
    const double lo = std::min(0.0, p) + std::min(0.0, q);
    const double hi = std::max(0.0, p) + std::max(0.0, q);
    return std::array<double, 3>{p, q, -lo + unit_draw(rng) * (1.0 - (hi - lo))};
  };
  const auto first = row();
  const auto second = row();
  return product_map_from_json({{"kind", "affine_mix"},
                                {"a", first[0]},
                                {"b", first[1]},
                                {"c", first[2]},
                                {"d", second[0]},
                                {"e", second[1]},
                                {"f", second[2]}},
                               product(unit(), unit()));
}

}  // namespace kmfp::scenarios
