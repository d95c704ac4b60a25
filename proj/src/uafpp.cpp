#include "kmfp/uafpp.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

#include "kmfp/errors.hpp"
#include "kmfp/rates.hpp"

namespace kmfp {

namespace {

constexpr std::uint64_t kMaxExplicitSum = 10'000'000;

void require_positive(double v, const char* name) {
  if (!(v > 0) || !std::isfinite(v)) throw ArgumentError(fmt::format("{} must be positive", name));
}

}  // namespace

RegularityModulus uafpp_to_regularity(const UafppModulus& phi, const Schedule& sched) {
  if (!phi.D_of) throw ArgumentError("uafpp_to_regularity: modulus has no D");
  RegularityModulus r;
  r.residual_factor = phi.residual_factor + 1.0;
  r.label = "h(eps, max{b, D}) from " + phi.label;
  r.N_of = [phi, K = sched.K(), alpha = sched.alpha()](double eps, double b) {
    require_positive(eps, "epsilon");
    require_positive(b, "b");
    const double d = phi.D_of(eps, b);
    require_positive(d, "D(eps, b)");
    return rate_brs({rational_from_double(eps), rational_from_double(std::max(b, d)), K, alpha});
  };
  return r;
}

UafppModulus regularity_to_uafpp(const RegularityModulus& r, const Schedule& sched,
                                 std::uint64_t step_cap) {
  if (!r.N_of) throw ArgumentError("regularity_to_uafpp: modulus has no N");
  UafppModulus phi;
  phi.residual_factor = r.residual_factor;
  phi.label = "b*sum(lambda_i, i<N) from " + r.label;
  phi.D_of = [r, sched](double eps, double b) -> double {
    require_positive(eps, "epsilon");
    require_positive(b, "b");
    const BigCount n = r.N_of(eps, b);
    if (!n.has_value()) return HUGE_VAL;
    if (n.value() <= kMaxExplicitSum) {
      return to_double(rational_from_double(b) * sched.partial_sum(n.value().convert_to<std::size_t>()));
    }
    return to_double(rational_from_double(b) * Rational(n.value()));
  };
  phi.witness = [r, sched, step_cap](const HyperbolicSpace& s, const NonexpansiveMap& t,
                                     const Point& x, double eps, double b) {
    const BigCount n = r.N_of(eps, b);
    const BigInt cap(step_cap);
    const BigInt steps = n.has_value() ? std::min(n.value(), cap) : cap;
    return km_point(s, t, x, sched, steps.convert_to<std::size_t>());
  };
  return phi;
}

double banach_ufpp_modulus(double k, double b) {
  if (!(k > 0 && k < 1)) throw ArgumentError("banach modulus: k must lie in (0,1)");
  require_positive(b, "b");
  return b / (1.0 - k);
}

BanachResult banach_fixed_point(const MetricSpace& s, const NonexpansiveMap& t, const Point& x,
                                double k, double tol, std::size_t max_iter, double eta) {
  if (!(k > 0 && k < 1)) throw ArgumentError("banach_fixed_point: k must lie in (0,1)");
  require_positive(tol, "tolerance");
  s.require_member(x, "banach start");
  BanachResult res;
  Point cur = x;
  Point next = t(cur);
  double step = s.distance(cur, next);
  res.radius = step / (1.0 - k);
  for (std::size_t n = 0; step > (1.0 - k) * tol; ++n) {
    if (n >= max_iter) {
      throw PreconditionError(fmt::format("banach_fixed_point: no convergence in {} steps", max_iter));
    }
    Point after = t(next);
    const double next_step = s.distance(next, after);
    if (next_step > k * step + eta) {
      throw PreconditionError(fmt::format(
          "not a {}-contraction: step {} grew from {} to {}", k, n + 1, format_real(step),
          format_real(next_step)));
    }
    cur = std::move(next);
    next = std::move(after);
    step = next_step;
    res.iterations = n + 1;
  }
  res.point = cur;
  res.residual = step;
  res.distance_from_start = s.distance(x, cur);
  res.certified = res.distance_from_start <= res.radius + eta;
  return res;
}

nlohmann::json GkReport::to_json() const {
  nlohmann::json j{{"bound", format_real(bound)},
                   {"checked", checked},
                   {"max_displacement", format_real(max_displacement)},
                   {"passed", passed}};
  if (x) {
    j["violation"] = {{"x", point_to_json(*x)}, {"y", point_to_json(*y)}};
  }
  return j;
}

GkReport gk_boundedness_check(const MetricSpace& c, double d1, std::size_t samples,
                              std::uint64_t seed,
                              const std::vector<std::pair<Point, Point>>& extra, double eta) {
  require_positive(d1, "D1");
  GkReport report;
  report.bound = 2.0 * d1 + 1.0;
  // T ≡ y is nonexpansive on any space.
  const auto check = [&](const Point& x, const Point& y) {
    c.require_member(y, "gk constant value");
    const auto space = std::shared_ptr<const MetricSpace>(&c, [](const MetricSpace*) {});
    const NonexpansiveMap t(space, [y](const Point&) { return y; }, "const " + to_string(y));
    const double disp = c.distance(x, t(x));
    ++report.checked;
    report.max_displacement = std::max(report.max_displacement, disp);
    if (report.passed && disp > report.bound + eta) {
      report.passed = false;
      report.x = x;
      report.y = y;
    }
  };
  for (const auto& [x, y] : extra) check(x, y);
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < samples; ++i) {
    const Point x = c.sample(rng);
    const Point y = c.sample(rng);
    check(x, y);
  }
  return report;
}

nlohmann::json UafppCheckReport::to_json() const {
  auto list = nlohmann::json::array();
  for (const auto& f : failures) {
    list.push_back({{"map", f.map},
                    {"x", point_to_json(f.x)},
                    {"x_star", point_to_json(f.x_star)},
                    {"distance", format_real(f.distance)},
                    {"residual", format_real(f.residual)}});
  }
  return {{"passed", passed},
          {"checked", checked},
          {"skipped", skipped},
          {"radius", format_real(radius)},
          {"tolerance", format_real(tolerance)},
          {"failures", list}};
}

UafppCheckReport check_uafpp_empirically(
    const HyperbolicSpace& s, const std::vector<NonexpansiveMap>& maps, double eps, double b,
    const UafppModulus& phi,
    const std::function<Point(const NonexpansiveMap&, const Point&)>& probe, std::size_t starts,
    std::uint64_t seed, double eta) {
  require_positive(eps, "epsilon");
  require_positive(b, "b");
  if (!probe && !phi.witness) throw ArgumentError("check_uafpp_empirically: no probe and no witness");
  UafppCheckReport report;
  report.radius = phi.D_of(eps, b);
  report.tolerance = phi.residual_factor * eps;
  std::mt19937_64 rng(seed);
  for (const auto& t : maps) {
    for (std::size_t i = 0; i < starts; ++i) {
      const Point x = s.sample(rng);
      if (s.distance(x, t(x)) > b) {
        ++report.skipped;
        continue;
      }
      ++report.checked;
      const Point xs = probe ? probe(t, x) : phi.witness(s, t, x, eps, b);
      const double dist = s.distance(x, xs);
      const double res = s.distance(xs, t(xs));
      if (dist > report.radius + eta || res > report.tolerance + eta) {
        report.passed = false;
        if (report.failures.size() < 10) report.failures.push_back({t.label(), x, xs, dist, res});
      }
    }
  }
  return report;
}

nlohmann::json modulus_table(const UafppModulus& phi, const std::vector<double>& eps_grid,
                             const std::vector<double>& b_grid) {
  auto rows = nlohmann::json::array();
  for (double eps : eps_grid) {
    for (double b : b_grid) {
      rows.push_back({{"eps", format_real(eps)}, {"b", format_real(b)},
                      {"D", format_real(phi.D_of(eps, b))}});
    }
  }
  return rows;
}

nlohmann::json modulus_table(const RegularityModulus& r, const std::vector<double>& eps_grid,
                             const std::vector<double>& b_grid) {
  auto rows = nlohmann::json::array();
  for (double eps : eps_grid) {
    for (double b : b_grid) {
      rows.push_back({{"eps", format_real(eps)}, {"b", format_real(b)}, {"N", r.N_of(eps, b).to_json()}});
    }
  }
  return rows;
}

}  // namespace kmfp
