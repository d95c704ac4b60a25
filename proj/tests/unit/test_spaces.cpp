#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kmfp/errors.hpp"
#include "kmfp/spaces.hpp"

using namespace kmfp;

TEST_CASE("interval distance and membership") {
  const auto s = make_interval(0.0, 1.0);
  CHECK(s->distance(Point{0.2}, Point{0.9}) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(s->contains(Point{1.0 + 1e-13}));
  CHECK_FALSE(s->contains(Point{1.0 + 1e-6}));
  CHECK(s->diameter().value() == 1.0);
  CHECK_THROWS_AS(make_interval(1.0, 1.0), ArgumentError);
  CHECK_THROWS_AS(make_interval(2.0, 1.0), ArgumentError);
}

TEST_CASE("half-infinite intervals") {
  const auto s = make_interval(0.0, INFINITY);
  CHECK_FALSE(s->bounded());
  CHECK_FALSE(s->diameter().has_value());
  CHECK(s->contains(Point{1e300}));
  CHECK_FALSE(s->contains(Point{-1.0}));
}

TEST_CASE("euclidean") {
  const auto s = make_euclidean(2);
  CHECK(s->distance(Point{0, 0}, Point{3, 4}) == 5.0);
  CHECK(s->convex_comb(Point{0, 0}, Point{2, 4}, 0.25) == Point{0.5, 1.0});
  CHECK_THROWS_AS(make_euclidean(0), ArgumentError);
  CHECK_THROWS_AS(s->distance(Point{0}, Point{1, 1}), DomainError);
  CHECK_THROWS_AS(s->convex_comb(Point{0, 0}, Point{1, 1}, 1.5), ArgumentError);
}

TEST_CASE("star tree metric") {
  const auto t = make_star_tree(3, 2.0);
  CHECK(t->distance(t->make_point(1, 0.3), t->make_point(2, 0.4)) == doctest::Approx(0.7));
  CHECK(t->distance(t->make_point(1, 0.3), t->make_point(1, 1.5)) == doctest::Approx(1.2));
  CHECK(t->make_point(2, 0.0) == t->make_point(0, 0.0));
  CHECK(t->diameter().value() == 4.0);
  CHECK_THROWS_AS(make_star_tree(1, 1.0), ArgumentError);
  CHECK_THROWS_AS(t->make_point(3, 0.5), ArgumentError);

  // Geodesic across the hub: from (1, 0.3) to (2, 0.4), at λ = 0.25 we are
  // 0.175 along, still on ray 1 at offset 0.125; at λ = 0.5, on ray 2.
  const Point a = t->convex_comb(t->make_point(1, 0.3), t->make_point(2, 0.4), 0.25);
  CHECK(a[0] == 1.0);
  CHECK(a[1] == doctest::Approx(0.125));
  const Point b = t->convex_comb(t->make_point(1, 0.3), t->make_point(2, 0.4), 0.5);
  CHECK(b[0] == 2.0);
  CHECK(b[1] == doctest::Approx(0.05));
}

TEST_CASE("poincare disk") {
  const auto d = make_poincare_disk();
  CHECK(d->distance(Point{0, 0}, Point{0.5, 0}) == doctest::Approx(std::log(3.0)).epsilon(1e-14));
  CHECK_FALSE(d->contains(Point{1.0, 0.0}));
  // Rotation invariance.
  CHECK(d->distance(Point{0, 0}, Point{0, 0.5}) == doctest::Approx(std::log(3.0)));
  // The geodesic midpoint between z and -z is 0.
  const Point m = d->convex_comb(Point{0.3, 0.4}, Point{-0.3, -0.4}, 0.5);
  CHECK(std::abs(m[0]) < 1e-12);
  CHECK(std::abs(m[1]) < 1e-12);
}

TEST_CASE("circle is a metric space only") {
  const auto c = make_circle();
  CHECK(c->distance(Point{0.0}, Point{std::numbers::pi}) == doctest::Approx(std::numbers::pi));
  CHECK(c->distance(Point{0.1}, Point{2 * std::numbers::pi - 0.1}) == doctest::Approx(0.2));
  CHECK(check_metric_axioms(*c, 500, 1, 1e-9).passed());
}

TEST_CASE("product distance is the max of the components") {
  const auto h = product(make_interval(0.0, 1.0), make_interval(0.0, 1.0));
  CHECK(h->distance(h->join(Point{0}, Point{0}), h->join(Point{1}, Point{0.5})) == 1.0);
  const Point p = h->join(Point{0.3}, Point{0.6});
  CHECK(h->distance(p, p) == 0.0);
  CHECK(h->first(p) == Point{0.3});
  CHECK(h->second(p) == Point{0.6});
  CHECK(h->contains_pair(Point{0.3}, Point{0.6}));
  CHECK_FALSE(h->contains_pair(Point{1.3}, Point{0.6}));
}

TEST_CASE("product of the real line and the circle") {
  const auto h = product(make_interval(-INFINITY, INFINITY), make_circle());
  const double d = h->distance(h->join(Point{0.0}, Point{0.0}), h->join(Point{3.0}, Point{std::numbers::pi}));
  CHECK(d == std::max(3.0, std::numbers::pi));
}

TEST_CASE("axiom reports") {
  CHECK(check_axioms(*make_euclidean(2), 1000, 3, 1e-9).passed());
  CHECK(check_axioms(*make_star_tree(3, 1.0), 1000, 3, 1e-9).passed());
  const auto broken = check_axioms(*make_broken_w(make_euclidean(2)), 1000, 3, 1e-9);
  REQUIRE(broken.find("W2") != nullptr);
  CHECK_FALSE(broken.find("W2")->passed);
  CHECK(broken.find("W2")->counterexample.has_value());
  CHECK(broken.find("metric:triangle")->passed);
  CHECK_THROWS_AS(check_axioms(*make_euclidean(1), 0, 1, 1e-9), ArgumentError);
}

TEST_CASE("space descriptors round-trip") {
  for (const char* text : {R"({"kind":"interval","a":0,"b":1})", R"({"kind":"euclidean","n":3})",
                           R"({"kind":"poincare_disk"})", R"({"kind":"star_tree","rays":4,"length":2})",
                           R"({"kind":"interval","a":0,"b":"inf"})"}) {
    const auto s = space_from_json(nlohmann::json::parse(text));
    CHECK(space_from_json(s->descriptor())->descriptor() == s->descriptor());
  }
  CHECK_THROWS_AS(space_from_json(nlohmann::json::parse(R"({"kind":"torus"})")), ConfigError);
  CHECK_THROWS_AS(space_from_json(nlohmann::json::parse(R"({"a":0})")), ConfigError);
  CHECK_THROWS_AS(hyperbolic_space_from_json(nlohmann::json::parse(R"({"kind":"circle"})")), ConfigError);
}
