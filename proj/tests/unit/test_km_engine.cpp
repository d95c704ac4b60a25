#include <doctest.h>

#include <sstream>

#include "kmfp/errors.hpp"
#include "kmfp/km_engine.hpp"

using namespace kmfp;

namespace {
const auto kLine = make_interval(-INFINITY, INFINITY);
Schedule half() { return Schedule::constant(Rational(1, 2), 2, AlphaFunction::linear(2)); }
}  // namespace

TEST_CASE("KM towards zero") {
  const NonexpansiveMap zero(kLine, [](const Point&) { return Point{0.0}; }, "0");
  const auto trace = km_iterate(*kLine, zero, Point{1.0}, half(), 4);
  const std::vector<double> expected{1, 0.5, 0.25, 0.125, 0.0625};
  REQUIRE(trace.points.size() == 5);
  for (std::size_t n = 0; n < 5; ++n) {
    CHECK(trace.points[n][0] == expected[n]);
    CHECK(trace.residuals[n] == expected[n]);
  }
}

TEST_CASE("KM with a translation") {
  const NonexpansiveMap shift(kLine, [](const Point& x) { return Point{x[0] + 1}; }, "x+1");
  const auto trace = km_iterate(*kLine, shift, Point{0.0}, half(), 3);
  const std::vector<double> expected{0, 0.5, 1, 1.5};
  for (std::size_t n = 0; n < 4; ++n) {
    CHECK(trace.points[n][0] == expected[n]);
    CHECK(trace.residuals[n] == 1.0);
  }
}

TEST_CASE("KM with the identity is stationary") {
  const NonexpansiveMap id(kLine, [](const Point& x) { return x; }, "id");
  const auto trace = km_iterate(*kLine, id, Point{3.0}, half(), 10);
  for (std::size_t n = 0; n <= 10; ++n) {
    CHECK(trace.points[n] == Point{3.0});
    CHECK(trace.residuals[n] == 0.0);
  }
  CHECK(estimate_residual_inf(*kLine, id, Point{3.0}, half(), 10) == 0.0);
  CHECK(km_point(*kLine, id, Point{3.0}, half(), 10) == Point{3.0});
}

TEST_CASE("domain escape names the step") {
  // 0.5 → 0.65 → 0.8, then T(0.8) = 1.1 leaves [0,1].
  const auto unit = make_interval(0.0, 1.0);
  const NonexpansiveMap push(unit, make_interval(-INFINITY, INFINITY),
                             [](const Point& x) { return Point{x[0] + 0.3}; }, "x+0.3");
  try {
    km_iterate(*unit, push, Point{0.5}, half(), 10);
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("km step 2: T(x_2)") != std::string::npos);
  }
}

TEST_CASE("schedule validation") {
  const auto ok = validate_schedule(half(), 1000);
  CHECK(ok.valid);
  CHECK(ok.horizon == 1000);

  const auto one = validate_schedule(Schedule::constant(1, 5, AlphaFunction::identity()), 10);
  CHECK_FALSE(one.valid);
  CHECK(one.first_violation == 0u);
  CHECK(one.clause == "bounded-away-from-one");

  // 1/(n+2) with α = id: at n = 1 the sum 1/2 + 1/3 is already below 1, and
  // the later n = 3 (1/2+1/3+1/4+1/5 < 3) fails too.
  const auto harmonic = Schedule::inverse_shift(2, 2, AlphaFunction::identity());
  const auto v = validate_schedule(harmonic, 10);
  CHECK_FALSE(v.valid);
  CHECK(v.first_violation == 1u);
  CHECK(v.clause == "divergence");
  CHECK(harmonic.partial_sum(4) == Rational(77, 60));
  CHECK(harmonic.partial_sum(4) < 3);
}

TEST_CASE("schedule values and partial sums are exact") {
  const auto tab = Schedule::tabulated({Rational(1, 3), Rational(1, 4)}, Rational(1, 2), 2,
                                       AlphaFunction::linear(3));
  CHECK(tab.lambda_exact(0) == Rational(1, 3));
  CHECK(tab.lambda_exact(5) == Rational(1, 2));
  CHECK(tab.partial_sum(4) == Rational(1, 3) + Rational(1, 4) + 1);
  CHECK(half().partial_sum(10) == 5);
  CHECK(half().lambda(7) == 0.5);
  CHECK_THROWS(Schedule::constant(Rational(1, 2), 0, AlphaFunction::identity()));
  CHECK_THROWS(Schedule::constant(Rational(3, 2), 2, AlphaFunction::identity()));
}

TEST_CASE("schedule config") {
  const auto s = schedule_from_json(nlohmann::json::parse(
      R"({"lambda":{"kind":"constant","value":"1/2"},"K":2,"alpha":{"kind":"linear","c":"2"}})"));
  CHECK(s.K() == 2);
  CHECK(s.lambda_exact(3) == Rational(1, 2));
  CHECK_THROWS_AS(schedule_from_json(nlohmann::json::parse(R"({"lambda":{"kind":"wild"},"K":2})")),
                  ConfigError);
}

TEST_CASE("estimator examples") {
  const NonexpansiveMap shift(kLine, [](const Point& x) { return Point{x[0] + 1}; }, "x+1");
  CHECK(estimate_residual_inf(*kLine, shift, Point{0.0}, half(), 500) == 1.0);
  const auto half_line = make_interval(0.0, INFINITY);
  const NonexpansiveMap down(half_line, [](const Point& x) { return Point{std::max(x[0] - 1, 0.0)}; }, "d");
  CHECK(estimate_residual_inf(*half_line, down, Point{5.0}, half(), 60) <= 1e-9);
}

TEST_CASE("trace CSV") {
  const NonexpansiveMap shift(kLine, [](const Point& x) { return Point{x[0] + 1}; }, "x+1");
  std::ostringstream csv;
  write_trace_csv(csv, *kLine, km_iterate(*kLine, shift, Point{0.0}, half(), 3));
  CHECK(csv.str() == "n,residual,x\n0,1,0\n1,1,0.5\n2,1,1\n3,1,1.5\n");
}
