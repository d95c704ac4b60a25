#include "kmfp/km_engine.hpp"

#include <fmt/format.h>

#include "kmfp/errors.hpp"

namespace kmfp {

namespace {

// Largest α(n) + 1 for which the divergence clause is still summed.
constexpr std::size_t kMaxDivergenceTerms = 50'000'000;

}  // namespace

Schedule::Schedule(Kind kind, std::uint64_t K, AlphaFunction alpha)
    : kind_(kind), K_(K), alpha_(std::move(alpha)) {
  if (K == 0) throw ArgumentError("schedule: K must be at least 1");
}

Schedule Schedule::constant(Rational value, std::uint64_t K, AlphaFunction alpha) {
  if (value < 0 || value > 1) throw ArgumentError("schedule: constant lambda must lie in [0,1]");
  Schedule s(Kind::constant, K, std::move(alpha));
  s.constant_double_ = to_double(value);
  s.label_ = "lambda=" + value.str();
  s.constant_ = std::move(value);
  return s;
}

Schedule Schedule::inverse_shift(std::uint64_t shift, std::uint64_t K, AlphaFunction alpha) {
  if (shift < 2) throw ArgumentError("schedule: inverse_shift needs shift >= 2 so that lambda < 1");
  Schedule s(Kind::inverse_shift, K, std::move(alpha));
  s.shift_ = shift;
  s.label_ = fmt::format("lambda=1/(n+{})", shift);
  return s;
}

Schedule Schedule::tabulated(std::vector<Rational> values, Rational tail, std::uint64_t K,
                             AlphaFunction alpha) {
  for (const auto& v : values) {
    if (v < 0 || v > 1) throw ArgumentError("schedule: tabulated lambda must lie in [0,1]");
  }
  if (tail < 0 || tail > 1) throw ArgumentError("schedule: tail lambda must lie in [0,1]");
  Schedule s(Kind::tabulated, K, std::move(alpha));
  s.label_ = fmt::format("lambda=table[{}] then {}", values.size(), tail.str());
  s.table_ = std::move(values);
  s.tail_ = std::move(tail);
  return s;
}

Schedule Schedule::custom(LambdaFn lambda, std::uint64_t K, AlphaFunction alpha, std::string label) {
  if (!lambda) throw ArgumentError("schedule: null lambda function");
  Schedule s(Kind::custom, K, std::move(alpha));
  s.custom_ = std::move(lambda);
  s.label_ = std::move(label);
  return s;
}

Rational Schedule::lambda_exact(std::size_t n) const {
  switch (kind_) {
    case Kind::constant:
      return constant_;
    case Kind::inverse_shift:
      return Rational(1, BigInt(n) + shift_);
    case Kind::tabulated:
      return n < table_.size() ? table_[n] : tail_;
    case Kind::custom:
      return custom_(n);
  }
  return 0;
}

double Schedule::lambda(std::size_t n) const {
  if (kind_ == Kind::constant) return constant_double_;
  if (kind_ == Kind::inverse_shift) return 1.0 / static_cast<double>(n + shift_);
  return to_double(lambda_exact(n));
}

Rational Schedule::partial_sum(std::size_t count) const {
  switch (kind_) {
    case Kind::constant:
      return constant_ * count;
    case Kind::tabulated: {
      Rational sum = 0;
      const std::size_t head = std::min(count, table_.size());
      for (std::size_t i = 0; i < head; ++i) sum += table_[i];
      if (count > table_.size()) sum += tail_ * (count - table_.size());
      return sum;
    }
    case Kind::inverse_shift:
    case Kind::custom: {
      Rational sum = 0;
      for (std::size_t i = 0; i < count; ++i) sum += lambda_exact(i);
      return sum;
    }
  }
  return 0;
}

nlohmann::json Schedule::descriptor() const {
  nlohmann::json lambda;
  switch (kind_) {
    case Kind::constant:
      lambda = {{"kind", "constant"}, {"value", constant_.str()}};
      break;
    case Kind::inverse_shift:
      lambda = {{"kind", "inverse_shift"}, {"shift", shift_}};
      break;
    case Kind::tabulated: {
      auto values = nlohmann::json::array();
      for (const auto& v : table_) values.push_back(v.str());
      lambda = {{"kind", "tabulated"}, {"values", values}, {"tail", tail_.str()}};
      break;
    }
    case Kind::custom:
      lambda = {{"kind", "custom"}, {"label", label_}};
      break;
  }
  return {{"lambda", lambda}, {"K", K_}, {"alpha", alpha_.descriptor()}};
}

namespace {

Rational rational_from_json(const nlohmann::json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number()) return rational_from_double(v.get<double>());
  throw ConfigError("expected a rational, got " + v.dump());
}

}  // namespace

Schedule schedule_from_json(const nlohmann::json& j) {
  try {
    const auto& lambda = j.at("lambda");
    const auto K = j.at("K").get<std::uint64_t>();
    const auto alpha = alpha_from_json(j.at("alpha"));
    const auto kind = lambda.at("kind").get<std::string>();
    if (kind == "constant") return Schedule::constant(rational_from_json(lambda.at("value")), K, alpha);
    if (kind == "inverse_shift") {
      return Schedule::inverse_shift(lambda.at("shift").get<std::uint64_t>(), K, alpha);
    }
    if (kind == "tabulated") {
      std::vector<Rational> values;
      for (const auto& v : lambda.at("values")) values.push_back(rational_from_json(v));
      return Schedule::tabulated(std::move(values), rational_from_json(lambda.at("tail")), K, alpha);
    }
    throw ConfigError("unknown lambda kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("schedule: ") + e.what());
  } catch (const ArgumentError& e) {
    throw ConfigError(e.what());
  }
}

ScheduleValidation validate_schedule(const Schedule& sched, std::size_t horizon) {
  ScheduleValidation report;
  report.horizon = horizon;
  const Rational ceiling = Rational(1) - Rational(1, sched.K());
  const bool closed_form_sums = sched.descriptor().at("lambda").at("kind") != "inverse_shift" &&
                                sched.descriptor().at("lambda").at("kind") != "custom";

  // prefix[k] = Σ_{i<k} λᵢ, extended on demand.
  std::vector<Rational> prefix{Rational(0)};
  const auto fail = [&](std::size_t n, std::string clause, std::string detail) {
    report.valid = false;
    report.first_violation = n;
    report.clause = std::move(clause);
    report.detail = std::move(detail);
    return report;
  };

  for (std::size_t n = 0; n <= horizon; ++n) {
    const Rational lam = sched.lambda_exact(n);
    if (lam < 0) return fail(n, "lambda-range", fmt::format("lambda_{} = {} < 0", n, lam.str()));
    if (lam > ceiling) {
      return fail(n, "bounded-away-from-one",
                  fmt::format("lambda_{} = {} > 1 - 1/K = {}", n, lam.str(), ceiling.str()));
    }
    const BigInt a = sched.alpha()(BigInt(n));
    const BigInt terms = a + 1;
    if (terms > kMaxDivergenceTerms) {
      return fail(n, "divergence",
                  fmt::format("alpha({}) = {} is too large to sum explicitly", n, a.str()));
    }
    const auto count = terms.convert_to<std::size_t>();
    Rational sum;
    if (closed_form_sums) {
      sum = sched.partial_sum(count);
    } else {
      while (prefix.size() <= count) prefix.push_back(prefix.back() + sched.lambda_exact(prefix.size() - 1));
      sum = prefix[count];
    }
    if (sum < n) {
      return fail(n, "divergence",
                  fmt::format("sum_(i<={}) lambda_i = {} ~ {} < {}", a.str(), sum.str(),
                              format_real(to_double(sum)), n));
    }
  }
  return report;
}

namespace {

Point checked_image(const HyperbolicSpace& s, const NonexpansiveMap& t, const Point& x,
                    std::size_t n) {
  Point tx = t(x);
  if (tx.size() != s.dimension() || !s.contains(tx)) {
    throw DomainError(fmt::format("km step {}: T(x_{}) = {} left the space ({})", n, n,
                                  to_string(tx), t.label()));
  }
  return tx;
}

Point checked_step(const HyperbolicSpace& s, const Point& x, const Point& tx, double lambda,
                   std::size_t n) {
  Point next = s.convex_comb(x, tx, lambda);
  if (!s.contains(next)) {
    throw DomainError(
        fmt::format("km step {}: x_{} = {} left the space", n + 1, n + 1, to_string(next)));
  }
  return next;
}

}  // namespace

ResidualTrace km_iterate(const HyperbolicSpace& s, const NonexpansiveMap& t, const Point& x0,
                         const Schedule& sched, std::size_t steps) {
  s.require_member(x0, "km starting point");
  ResidualTrace trace;
  trace.points.reserve(steps + 1);
  trace.residuals.reserve(steps + 1);
  Point x = x0;
  for (std::size_t n = 0;; ++n) {
    const Point tx = checked_image(s, t, x, n);
    trace.residuals.push_back(s.distance(x, tx));
    trace.points.push_back(x);
    if (n == steps) break;
    x = checked_step(s, x, tx, sched.lambda(n), n);
  }
  return trace;
}

Point km_point(const HyperbolicSpace& s, const NonexpansiveMap& t, const Point& x0,
               const Schedule& sched, std::size_t steps) {
  s.require_member(x0, "km starting point");
  Point x = x0;
  for (std::size_t n = 0; n < steps; ++n) {
    const Point tx = checked_image(s, t, x, n);
    x = checked_step(s, x, tx, sched.lambda(n), n);
  }
  return x;
}

double estimate_residual_inf(const HyperbolicSpace& s, const NonexpansiveMap& t, const Point& x0,
                             const Schedule& sched, std::size_t steps) {
  const Point xn = km_point(s, t, x0, sched, steps);
  return s.distance(xn, checked_image(s, t, xn, steps));
}

void write_trace_csv(std::ostream& out, const MetricSpace& s, const ResidualTrace& trace) {
  out << "n,residual";
  for (const auto& name : s.coordinate_names()) out << ',' << name;
  out << '\n';
  for (std::size_t n = 0; n < trace.points.size(); ++n) {
    out << n << ',' << format_real(trace.residuals[n]);
    for (double c : trace.points[n].coords) out << ',' << format_real(c);
    out << '\n';
  }
}

}  // namespace kmfp
