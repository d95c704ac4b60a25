#include <doctest.h>

#include "kmfp/errors.hpp"
#include "kmfp/rates.hpp"
#include "kmfp/uafpp.hpp"

using namespace kmfp;

namespace {

const auto kLine = make_interval(-INFINITY, INFINITY);

UafppModulus constant_modulus(double d) {
  UafppModulus m;
  m.D_of = [d](double, double) { return d; };
  m.label = "const";
  return m;
}

RegularityModulus constant_regularity(long n) {
  RegularityModulus r;
  r.N_of = [n](double, double) { return BigCount::exact(BigInt(n)); };
  r.label = "const";
  return r;
}

}  // namespace

TEST_CASE("UAFPP to regularity") {
  auto id_sched = Schedule::constant(Rational(1, 2), 1, AlphaFunction::identity());
  const auto r = uafpp_to_regularity(constant_modulus(1.0), id_sched);
  CHECK(r.N_of(4, 1).value() == 30);
  CHECK(r.N_of(4, 0.5).value() == rate_brs({4, 1, 1, AlphaFunction::identity()}).value());
  CHECK(r.residual_factor == 2.0);
  CHECK(r.N_of(4, 2).value() >= r.N_of(4, 1).value());
  CHECK_THROWS_AS(r.N_of(0, 1), ArgumentError);
  CHECK_THROWS_AS(r.N_of(1, -1), ArgumentError);
}

TEST_CASE("regularity to UAFPP") {
  const auto half = Schedule::constant(Rational(1, 2), 2, AlphaFunction::linear(2));
  CHECK(regularity_to_uafpp(constant_regularity(10), half, 100).D_of(1, 2) == 10.0);
  CHECK(regularity_to_uafpp(constant_regularity(0), half, 100).D_of(1, 2) == 0.0);
  const auto harmonic = Schedule::tabulated({1, Rational(1, 2), Rational(1, 3), Rational(1, 4)},
                                            Rational(1, 5), 1, AlphaFunction::identity());
  CHECK(regularity_to_uafpp(constant_regularity(4), harmonic, 100).D_of(1, 1) ==
        doctest::Approx(25.0 / 12.0).epsilon(1e-15));

  const auto back = regularity_to_uafpp(constant_regularity(0), half, 100);
  const NonexpansiveMap shift(kLine, [](const Point& x) { return Point{x[0] + 1}; }, "x+1");
  CHECK(back.witness(*kLine, shift, Point{2.0}, 1, 1) == Point{2.0});
}

TEST_CASE("Banach modulus") {
  CHECK(banach_ufpp_modulus(0.5, 1) == 2.0);
  CHECK(banach_ufpp_modulus(0.9, 1) == doctest::Approx(10.0));
  CHECK_THROWS_AS(banach_ufpp_modulus(1.0, 1), ArgumentError);
  CHECK_THROWS_AS(banach_ufpp_modulus(0.0, 1), ArgumentError);

  const NonexpansiveMap halve(kLine, [](const Point& x) { return Point{x[0] / 2}; }, "x/2");
  const auto r = banach_fixed_point(*kLine, halve, Point{1.0}, 0.5, 1e-12);
  CHECK(r.certified);
  CHECK(r.radius == 1.0);
  CHECK(std::abs(r.point[0]) <= 1e-11);
  CHECK(r.distance_from_start <= r.radius + 1e-12);

  const NonexpansiveMap stretch(kLine, [](const Point& x) { return Point{0.9 * x[0] + 1}; }, "0.9x+1");
  CHECK_THROWS_AS(banach_fixed_point(*kLine, stretch, Point{0.0}, 0.5, 1e-9), PreconditionError);
}

TEST_CASE("Goebel-Kirk check") {
  const auto ok = gk_boundedness_check(*make_interval(0.0, 1.0), 1.0, 500, 1);
  CHECK(ok.passed);
  CHECK(ok.bound == 3.0);
  CHECK(ok.max_displacement <= 1.0);
  const auto bad = gk_boundedness_check(*kLine, 1.0, 0, 1, {{Point{0.0}, Point{10.0}}});
  CHECK_FALSE(bad.passed);
  CHECK(bad.x == Point{0.0});
  CHECK(bad.y == Point{10.0});
  CHECK(gk_boundedness_check(*make_interval(0.0, 3.0), 1.0, 500, 2).passed);
}

TEST_CASE("empirical UAFPP check") {
  const auto unit = make_interval(0.0, 1.0);
  std::vector<NonexpansiveMap> maps;
  for (double k : {0.3, 0.5, 0.9}) {
    maps.emplace_back(unit, [k](const Point& x) { return Point{k * x[0] + (1 - k) * 0.25}; }, "c");
  }
  UafppModulus banach;
  banach.D_of = [](double, double b) { return banach_ufpp_modulus(0.9, b); };
  const auto probe = [](const NonexpansiveMap&, const Point&) { return Point{0.25}; };
  CHECK(check_uafpp_empirically(*unit, maps, 0.1, 1.0, banach, probe, 20, 1).passed);

  const auto tight = check_uafpp_empirically(*unit, maps, 0.1, 1.0, constant_modulus(1e-3), probe, 20, 1);
  CHECK_FALSE(tight.passed);
  CHECK_FALSE(tight.failures.empty());
  CHECK_THROWS_AS(check_uafpp_empirically(*unit, maps, 0.1, 1.0, constant_modulus(1), {}, 2, 1),
                  ArgumentError);
}

TEST_CASE("modulus tables") {
  const auto t = modulus_table(constant_modulus(2.0), {1.0, 0.5}, {1.0});
  REQUIRE(t.size() == 2);
  CHECK(t[0]["D"] == "2");
  const auto sched = Schedule::constant(Rational(1, 2), 1, AlphaFunction::identity());
  const auto n = modulus_table(uafpp_to_regularity(constant_modulus(1.0), sched), {4.0}, {1.0});
  CHECK(n[0]["N"]["value"] == "30");
}
