#include "criteria.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "../cli/commands.hpp"
#include "kmfp/km_engine.hpp"
#include "kmfp/rates.hpp"
#include "kmfp/spaces.hpp"
#include "kmfp/uafpp.hpp"
#include "scenarios.hpp"

namespace kmfp::acceptance {

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;
};

// Collects the first failure message; later checks still run.
class Verdict {
 public:
  void require(bool ok, const std::string& what) {
    if (!ok && passed_) {
      passed_ = false;
      detail_ = what;
    }
  }
  void note(const std::string& text) {
    if (passed_) detail_ = text;
  }
  Outcome done() const { return {passed_, detail_}; }

 private:
  bool passed_ = true;
  std::string detail_;
};

// 1 ------------------------------------------------------------------------------
Outcome axiom_suite() {
  Verdict v;
  const std::vector<HyperbolicPtr> spaces = {make_euclidean(2), make_interval(-3.0, 7.0),
                                             make_poincare_disk(), make_star_tree(3, 2.0)};
  std::uint64_t seed = 11;
  for (const auto& s : spaces) {
    const auto report = check_axioms(*s, 10000, seed++, 1e-9);
    std::string failed;
    for (const auto& r : report.results)
      if (!r.passed) failed += " " + r.name;
    v.require(report.passed(), s->kind() + " failed:" + failed);
  }
  const auto broken = check_axioms(*make_broken_w(make_euclidean(2)), 1000, 5, 1e-9);
  const auto* w2 = broken.find("W2");
  v.require(w2 && !w2->passed, "broken W was not caught by (W2)");
  v.note(fmt::format("4 spaces x 1e4 samples clean; broken W: W2 violation {:.3g}",
                     w2 ? w2->max_violation : 0.0));
  return v.done();
}

// 2 ------------------------------------------------------------------------------
Outcome residual_monotonicity() {
  Verdict v;
  std::mt19937_64 rng(2024);
  const auto space = make_euclidean(2);
  const auto sched = scenarios::half_schedule();
  double worst = 0.0;
  for (int k = 0; k < 500; ++k) {
    const auto f = scenarios::as_map(scenarios::random_square_affine(rng));
    const auto trace = km_iterate(*space, f, scenarios::random_square_point(rng), sched, 100);
    for (std::size_t n = 1; n < trace.residuals.size(); ++n) {
      worst = std::max(worst, trace.residuals[n] - trace.residuals[n - 1]);
    }
  }
  v.require(worst <= 1e-12, fmt::format("largest residual increase {:.3g}", worst));
  v.note(fmt::format("500 maps x 100 steps, largest increase {:.3g}", worst));
  return v.done();
}

// 3 ------------------------------------------------------------------------------
Outcome cross_parameter_stability() {
  Verdict v;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto sched = scenarios::half_schedule();
  const std::vector<ProductMap> maps = {scenarios::diagonal_problem().map,
                                        scenarios::random_product_map(rng)};
  double worst = -INFINITY;
  for (const auto& t : maps) {
    const auto c = t.domain()->fiber(Point{0.0});
    for (int k = 0; k < 200; ++k) {
      const Point x{unit(rng)}, y{unit(rng)}, u{unit(rng)}, w{unit(rng)};
      const double bound = std::max(std::abs(x[0] - y[0]), std::abs(u[0] - w[0]));
      const auto xu = km_iterate(*c, slice(t, u), x, sched, 50).points;
      const auto yw = km_iterate(*c, slice(t, w), y, sched, 50).points;
      for (std::size_t n = 0; n < xu.size(); ++n) {
        worst = std::max(worst, c->distance(xu[n], yw[n]) - bound);
      }
    }
  }
  v.require(worst <= 1e-9, fmt::format("excess {:.3g}", worst));
  v.note(fmt::format("2 maps x 200 tuples, n <= 50, max excess {:.3g}", worst));
  return v.done();
}

// 4 ------------------------------------------------------------------------------
BigInt naive_alpha_hat(const AlphaFunction& alpha, int i, const BigInt& n) {
  const auto tilde = [&](const BigInt& m) {
    BigInt best = alpha(n) + 1;
    for (BigInt j = 1; j <= m; ++j) best = std::max(best, BigInt(alpha(n + j) - j + 1));
    return BigInt(m + best);
  };
  BigInt a = tilde(0);
  for (int k = 0; k < i; ++k) a = tilde(a);
  return a;
}

Outcome rates_exactness() {
  Verdict v;
  const auto id = AlphaFunction::identity();
  const auto dbl = AlphaFunction::linear(2);
  for (int n = 0; n <= 20; ++n) {
    for (int i = 0; i <= 64; ++i) {
      const BigInt bn(n);
      const BigCount a = alpha_hat(id, BigInt(i), bn);
      v.require(a.is_exact() && a.value() == BigInt((i + 1) * (n + 1)),
                fmt::format("identity alpha_hat({},{}) = {}", i, n, a.to_string()));
      const BigInt expected = (2 * bn + 1) * ((BigInt(1) << (i + 1)) - 1);
      const BigCount b = alpha_hat(dbl, BigInt(i), bn);
      v.require(b.is_exact() && b.value() == expected,
                fmt::format("doubling alpha_hat({},{}) = {}", i, n, b.to_string()));
    }
  }
  for (int n = 0; n <= 10; ++n)
    for (int i = 0; i <= 20; ++i)
      v.require(naive_alpha_hat(id, i, n) == (i + 1) * (n + 1), "naive recursion disagrees (identity)");
  for (int n = 0; n <= 4; ++n)
    for (int i = 0; i <= 8; ++i)
      v.require(naive_alpha_hat(dbl, i, n) == alpha_hat(dbl, BigInt(i), BigInt(n)).value(),
                "naive recursion disagrees (doubling)");

  const BigCount h = rate_brs({4, 1, 1, id});
  const BigCount ht = rate_ishikawa({7, 1, 1, id});
  const BigCount g = rate_product(4, Rational(1, 4), Rational(1, 2), 1, id);
  v.require(h.is_exact() && h.value() == 30, "h(4,1,1,id) = " + h.to_string());
  v.require(ht.is_exact() && ht.value() == 178, "h~(7,1,1,id) = " + ht.to_string());
  v.require(g.is_exact() && g.value() == 30, "g(4,1/4,1/2,1,id) = " + g.to_string());
  v.note(fmt::format("closed forms i <= 64, n <= 20; h = {}, h~ = {}, g = {}", h.to_string(),
                     ht.to_string(), g.to_string()));
  return v.done();
}

// 5 ------------------------------------------------------------------------------
Outcome alpha_hat_monotone() {
  Verdict v;
  const std::vector<AlphaFunction> catalog = {
      AlphaFunction::identity(), AlphaFunction::linear(2), AlphaFunction::linear(Rational(3, 2)),
      AlphaFunction::linear(Rational(1, 2)),
      AlphaFunction::tabulated({0, 3, 1, 4, 1, 5, 9, 2, 6}, 2)};
  std::size_t compared = 0;
  for (const auto& alpha : catalog) {
    for (int n = 0; n <= 50; ++n) {
      BigCount prev = alpha_hat(alpha, BigInt(0), BigInt(n));
      for (int i = 0; i < 200; ++i) {
        const BigCount next = alpha_hat(alpha, BigInt(i + 1), BigInt(n));
        v.require(prev.has_value() && next.has_value() && next.value() >= prev.value(),
                  fmt::format("{}: alpha_hat({},{}) < alpha_hat({},{})", alpha.label(), i + 1, n, i, n));
        prev = next;
        ++compared;
      }
    }
  }
  v.note(fmt::format("{} catalogued alphas, {} exact comparisons", catalog.size(), compared));
  return v.done();
}

// 6 ------------------------------------------------------------------------------
Outcome residual_limit() {
  Verdict v;
  const auto line = make_interval(-INFINITY, INFINITY);
  const auto sched = scenarios::half_schedule();
  const NonexpansiveMap shift(line, [](const Point& x) { return Point{x[0] + 1.0}; }, "x+1");
  for (std::size_t n = 0; n <= 1000; ++n) {
    const double r = estimate_residual_inf(*line, shift, Point{0.0}, sched, n);
    v.require(r == 1.0, fmt::format("x+1: estimate {} at N = {}", format_real(r), n));
  }
  const auto half_line = make_interval(0.0, INFINITY);
  const NonexpansiveMap down(half_line, [](const Point& x) { return Point{std::max(x[0] - 1.0, 0.0)}; },
                             "max(x-1,0)");
  const double r60 = estimate_residual_inf(*half_line, down, Point{5.0}, sched, 60);
  v.require(r60 <= 1e-9, "max(x-1,0): estimate " + format_real(r60) + " at N = 60");
  v.note(fmt::format("x+1 gives 1 for N <= 1000; max(x-1,0) gives {:.3g} at N = 60", r60));
  return v.done();
}

// 7 ------------------------------------------------------------------------------
Outcome product_pipeline() {
  Verdict v;
  const auto diag = scenarios::diagonal_problem();
  const auto solved = solve_product_afpp(diag, Rational(1, 100), BoundedOrbitHypothesis{1, {}, 16, 3}, 400);
  v.require(solved.certificate.has_value(), "diagonal: no certificate (" + solved.diagnostic + ")");
  if (solved.certificate) {
    const auto& cert = *solved.certificate;
    v.require(cert.residual <= 0.01, "diagonal residual " + format_real(cert.residual));
    // The certificate point must be the one the φₙ + oracle path produces.
    const auto step = approx_fixed_sequence(diag, cert.n_used);
    v.require(step.z == cert.u && step.x == cert.x, "certificate point is not the sequence element");
  }
  const Probe on_diagonal = [](const Point& u) { return u; };
  const auto lemma = main_lemma_run(diag, Rational(1, 100), Rational(1, 100), Rational(1, 100),
                                    on_diagonal, 400);
  v.require(lemma.inequality_holds, "main lemma inequality fails at n = " + std::to_string(lemma.n_used));
  const auto full = main_lemma_run(diag, Rational(1, 100), Rational(1, 100), 4, on_diagonal, 400);
  v.require(!full.budget_truncated && full.n_used == 45 && full.inequality_holds,
            "untruncated main lemma run at g = 45 failed");

  const auto shift = scenarios::translation_problem();
  const Rational eps(1, 10);
  SupDisplacementHypothesis sup;
  sup.sup_rc = 1;
  sup.radius = [](const Rational&) { return Rational(1); };
  sup.probe = [delta = shift.delta](const Point& u, const Rational&) { return delta(u); };
  const auto sres = solve_product_afpp(shift, eps, sup, 60);
  v.require(sres.certificate.has_value(), "translation: no certificate (" + sres.diagnostic + ")");
  double rh = INFINITY;
  if (sres.certificate) {
    rh = estimate_rH(shift, sres.certificate->n_used);
    v.require(rh <= 1.0 + 2 * to_double(eps), "estimate_rH = " + format_real(rh) + " > r* + 2 eps");
  }
  v.note(fmt::format("diagonal residual {} at n = {}; g = 45 run holds; translation estimate_rH {}",
                     solved.certificate ? format_real(solved.certificate->residual) : "-",
                     solved.certificate ? solved.certificate->n_used : 0, format_real(rh)));
  return v.done();
}

// 8 ------------------------------------------------------------------------------
Outcome family_mode() {
  Verdict v;
  const BoundedOrbitHypothesis hyp{1, {}, 16, 9};
  const auto plain = solve_product_afpp(scenarios::diagonal_problem(), Rational(1, 100), hyp, 300);
  const auto family = solve_product_afpp(scenarios::diagonal_family_problem(), Rational(1, 100), hyp, 300);
  v.require(plain.certificate && family.certificate, "a path produced no certificate");
  if (plain.certificate && family.certificate) {
    v.require(plain.certificate->to_json() == family.certificate->to_json(),
              "family and plain certificates differ");
  }
  const auto report = check_family_invariance(scenarios::escaping_family_map(), 1000, 4);
  v.require(!report.passed, "escaping map was not flagged");
  v.note(report.passed ? "" : fmt::format("identical certificates; violation at x = {}, u = {}",
                                          to_string(*report.x), to_string(*report.u)));
  return v.done();
}

// 9 ------------------------------------------------------------------------------
// [0,1]² with the Euclidean metric, so that sampled starts lie in the set the
// diameter modulus talks about.
class UnitSquare final : public HyperbolicSpace {
 public:
  std::string kind() const override { return "unit_square"; }
  std::size_t dimension() const override { return 2; }
  bool contains(const Point& x) const override {
    return x.size() == 2 && x[0] >= -kBoundarySlack && x[0] <= 1 + kBoundarySlack &&
           x[1] >= -kBoundarySlack && x[1] <= 1 + kBoundarySlack;
  }
  Point sample(std::mt19937_64& rng) const override { return scenarios::random_square_point(rng); }
  nlohmann::json descriptor() const override { return {{"kind", kind()}}; }
  std::optional<double> diameter() const override { return std::sqrt(2.0); }

 protected:
  double do_distance(const Point& x, const Point& y) const override {
    return std::hypot(x[0] - y[0], x[1] - y[1]);
  }
  Point do_combine(const Point& x, const Point& y, double l) const override {
    return Point{(1 - l) * x[0] + l * y[0], (1 - l) * x[1] + l * y[1]};
  }
};

Outcome moduli() {
  Verdict v;
  const auto space = make_euclidean(2);
  const auto sched = scenarios::half_schedule();
  std::mt19937_64 rng(2024);  // criterion 2's map set
  std::uniform_int_distribution<int> steps(0, 100);
  std::vector<NonexpansiveMap> maps;
  double worst = -INFINITY;
  for (int k = 0; k < 500; ++k) {
    maps.push_back(scenarios::as_map(scenarios::random_square_affine(rng)));
    const Point x = scenarios::random_square_point(rng);
    const auto n = static_cast<std::size_t>(steps(rng));
    const double b = space->distance(x, maps.back()(x));
    const double d = b * to_double(sched.partial_sum(n));
    worst = std::max(worst, space->distance(x, km_point(*space, maps.back(), x, sched, n)) - d);
  }
  v.require(worst <= 1e-9, fmt::format("Fejer bound exceeded by {:.3g}", worst));

  for (double k : {0.3, 0.5, 0.9}) {
    for (int trial = 0; trial < 20; ++trial) {
      std::uniform_real_distribution<double> angle(0.0, 6.283185307179586), off(-5.0, 5.0);
      const double th = angle(rng);
      const double c0 = off(rng), c1 = off(rng);
      const double a00 = k * std::cos(th), a01 = -k * std::sin(th);
      const double a10 = k * std::sin(th), a11 = k * std::cos(th);
      const NonexpansiveMap t(space, [=](const Point& p) {
        return Point{a00 * p[0] + a01 * p[1] + c0, a10 * p[0] + a11 * p[1] + c1};
      }, "contraction");
      // Fixed point of x = Ax + c.
      const double m00 = 1 - a00, m01 = -a01, m10 = -a10, m11 = 1 - a11;
      const double det = m00 * m11 - m01 * m10;
      const Point fixed{(m11 * c0 - m01 * c1) / det, (m00 * c1 - m10 * c0) / det};
      Point x{off(rng), off(rng)};
      const double r0 = space->distance(x, t(x));
      for (int n = 0; n <= 60; ++n) {
        const double bound = std::pow(k, n) / (1 - k) * r0;
        v.require(space->distance(x, fixed) <= bound + 1e-9,
                  fmt::format("Banach bound fails for k = {} at n = {}", k, n));
        x = t(x);
      }
    }
  }

  UafppModulus diameter;
  diameter.D_of = [](double, double) { return std::sqrt(2.0); };
  diameter.label = "diam [0,1]^2";
  const auto back = regularity_to_uafpp(uafpp_to_regularity(diameter, sched), sched, 200);
  const double eps = 4.0;
  const double b = std::sqrt(2.0);
  const double d = back.D_of(eps, b);
  v.require(std::isfinite(d), "round-trip D is not finite");
  std::vector<NonexpansiveMap> subset(maps.begin(), maps.begin() + 50);
  const auto report = check_uafpp_empirically(UnitSquare{}, subset, eps, b, back, {}, 4, 17);
  v.require(report.passed && back.residual_factor == 2.0, "round-trip witnesses fail at 2 eps");
  v.note(fmt::format("Fejer slack {:.3g}; Banach k in {{0.3,0.5,0.9}}; round-trip D = {:.4g}, {} checks",
                     worst, d, report.checked));
  return v.done();
}

// 10 -----------------------------------------------------------------------------
Outcome goebel_kirk() {
  Verdict v;
  const auto bounded = gk_boundedness_check(*make_interval(0.0, 1.0), 1.0, 1000, 3);
  v.require(bounded.passed, "[0,1] reported a violation");
  const auto line = gk_boundedness_check(*make_interval(-INFINITY, INFINITY), 1.0, 100, 3,
                                         {{Point{0.0}, Point{10.0}}});
  v.require(!line.passed && line.x && (*line.x)[0] == 0.0 && (*line.y)[0] == 10.0,
            "R with D1 = 1 was not flagged by the pair (0, 10)");
  v.note(fmt::format("[0,1] max displacement {:.3g} <= 3; R: 10 > 3", bounded.max_displacement));
  return v.done();
}

// 11 -----------------------------------------------------------------------------
Outcome determinism() {
  Verdict v;
  const auto dir = std::filesystem::temp_directory_path() / "kmfp_acceptance";
  std::filesystem::create_directories(dir);
  const std::string text = scenarios::diagonal_config().dump(2);
  const auto cfg = cli::config_from_text(text);
  std::ostringstream sink;
  std::string contents[2];
  for (int run = 0; run < 2; ++run) {
    cli::Options opts;
    opts.out = (dir / fmt::format("certificate_{}.json", run)).string();
    const int code = cli::cmd_product(cfg, opts, sink, sink);
    v.require(code == cli::kOk, fmt::format("cmd_product exit code {}: {}", code, sink.str()));
    std::ifstream in(opts.out, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    contents[run] = buf.str();
  }
  v.require(!contents[0].empty() && contents[0] == contents[1], "certificate files differ");
  v.note(fmt::format("two runs, {} identical bytes", contents[0].size()));
  return v.done();
}

struct Criterion {
  int id;
  const char* title;
  double time_limit;  // seconds, 0 for none
  std::function<Outcome()> run;
};

}  // namespace

std::string format_line(const CriterionResult& r) {
  return fmt::format("[{}] {:2d} {} ({:.2f} s){}", r.passed ? "PASS" : "FAIL", r.id, r.title,
                     r.seconds, r.detail.empty() ? "" : ": " + r.detail);
}

std::vector<CriterionResult> run_all(std::ostream& out) {
  const std::vector<Criterion> criteria = {
      {1, "axiom suite", 10.0, axiom_suite},
      {2, "residual monotonicity", 10.0, residual_monotonicity},
      {3, "cross-parameter KM stability", 0.0, cross_parameter_stability},
      {4, "rates exactness", 0.0, rates_exactness},
      {5, "alpha-hat monotonicity", 0.0, alpha_hat_monotone},
      {6, "residual limit estimator", 0.0, residual_limit},
      {7, "product pipeline", 30.0, product_pipeline},
      {8, "family mode", 0.0, family_mode},
      {9, "UAFPP moduli", 0.0, moduli},
      {10, "Goebel-Kirk bound", 0.0, goebel_kirk},
      {11, "determinism", 0.0, determinism},
  };
  std::vector<CriterionResult> results;
  for (const auto& c : criteria) {
    CriterionResult r;
    r.id = c.id;
    r.title = c.title;
    const auto start = std::chrono::steady_clock::now();
    try {
      const Outcome o = c.run();
      r.passed = o.passed;
      r.detail = o.detail;
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit > 0 && r.seconds > c.time_limit) {
      r.passed = false;
      r.detail = fmt::format("took {:.1f} s, limit {:.0f} s", r.seconds, c.time_limit);
    }
    out << format_line(r) << std::endl;
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace kmfp::acceptance
