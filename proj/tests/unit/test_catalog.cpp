#include <doctest.h>

#include "kmfp/catalog.hpp"
#include "kmfp/errors.hpp"

using namespace kmfp;
using nlohmann::json;

TEST_CASE("numbers in configs") {
  CHECK(rational_from_json("3/4") == Rational(3, 4));
  CHECK(rational_from_json(2) == 2);
  CHECK(rational_from_json("0.25") == Rational(1, 4));
  CHECK(real_from_json("1/4") == 0.25);
  CHECK(real_from_json("-inf") == -INFINITY);
  CHECK(point_from_json(json::array({1, "1/2"})) == Point{1.0, 0.5});
  CHECK(point_from_json(3) == Point{3.0});
  CHECK_THROWS_AS(rational_from_json("three"), ConfigError);
}

TEST_CASE("self-map catalog") {
  const auto line = make_interval(-INFINITY, INFINITY);
  CHECK(map_from_json({{"kind", "translate"}, {"shift", {2}}}, line)(Point{1.0}) == Point{3.0});
  CHECK(map_from_json({{"kind", "affine"}, {"a", "1/2"}, {"c", 1}}, line)(Point{2.0}) == Point{2.0});
  const auto c = map_from_json({{"kind", "clamped_translate"}, {"shift", -1}, {"lo", 0}}, make_interval(0, INFINITY));
  CHECK(c(Point{0.5}) == Point{0.0});
  CHECK(c(Point{4.0}) == Point{3.0});
  CHECK_THROWS_AS(map_from_json({{"kind", "affine"}, {"a", 2}, {"c", 0}}, line), ConfigError);
  CHECK_THROWS_AS(map_from_json({{"kind", "rotate"}}, line), ConfigError);
  const auto plane = make_euclidean(2);
  const auto rot = map_from_json({{"kind", "affine"}, {"matrix", {{0, -1}, {1, 0}}}, {"offset", {0, 0}}}, plane);
  CHECK(rot(Point{1.0, 0.0}) == Point{0.0, 1.0});
}

TEST_CASE("product map catalog") {
  const auto h = product(make_interval(0, 1), make_interval(0, 1));
  const auto diag = product_map_from_json({{"kind", "diagonal_average"}}, h);
  CHECK(diag(Point{0.2}, Point{0.6}) == std::pair{Point{0.4}, Point{0.2}});
  const auto mix = product_map_from_json({{"kind", "affine_mix"}, {"a", "1/2"}, {"b", "1/2"}, {"e", 1}}, h);
  CHECK(mix(Point{1.0}, Point{0.0}).first == Point{0.5});
  CHECK_THROWS_AS(product_map_from_json({{"kind", "affine_mix"}, {"a", 1}, {"b", 1}}, h), ConfigError);
}

TEST_CASE("families from config") {
  const json selection = {{"kind", "constant"}, {"point", 0}};
  const auto h = product_space_from_json(
      {{"kind", "family"},
       {"ambient", {{"kind", "real_line"}}},
       {"M", {{"kind", "interval"}, {"a", 0}, {"b", 1}}},
       {"fibers", {{"kind", "interval_family"}, {"lo", 0}, {"hi", 1}, {"hi_slope", 1}}}},
      selection, 0);
  CHECK(h->kind() == "family");
  CHECK(h->contains_pair(Point{1.9}, Point{1.0}));
  CHECK_FALSE(h->contains_pair(Point{1.9}, Point{0.5}));
  CHECK_THROWS_AS(product_space_from_json(
                      {{"kind", "family"},
                       {"ambient", {{"kind", "real_line"}}},
                       {"M", {{"kind", "interval"}, {"a", 0}, {"b", 1}}},
                       {"fibers", {{"kind", "interval_family"}, {"lo", 1}, {"hi", 2}}}},
                      selection, 0),
                  ConfigError);
}

TEST_CASE("oracles and selections from config") {
  const auto m = make_interval(0, 1);
  CHECK(oracle_from_json({{"kind", "grid"}}, m)->name() == "grid");
  CHECK(oracle_from_json({{"kind", "affine"}}, m)->name() == "affine");
  CHECK_THROWS_AS(oracle_from_json({{"kind", "grid"}}, make_interval(0, INFINITY)), ConfigError);
  const auto s = selection_from_json({{"kind", "affine"}, {"a", "1/2"}, {"c", "1/4"}}, m, m);
  CHECK(s(Point{0.5}) == Point{0.5});
}
