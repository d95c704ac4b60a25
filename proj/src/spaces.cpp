#include "kmfp/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "kmfp/errors.hpp"
#include "kmfp/numeric.hpp"

namespace kmfp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool all_finite(const Point& x) {
  return std::all_of(x.coords.begin(), x.coords.end(), [](double v) { return std::isfinite(v); });
}

nlohmann::json bound_to_json(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  return v;
}

double bound_from_json(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(fmt::format("interval: missing '{}'", key));
  const auto& v = j.at(key);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
    return to_double(parse_rational(s));
  }
  throw ConfigError(fmt::format("interval: '{}' must be a number or \"inf\"", key));
}

std::complex<double> as_complex(const Point& p) { return {p[0], p[1]}; }

}  // namespace

std::string to_string(const Point& p) {
  std::string out = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ", ";
    out += format_real(p[i]);
  }
  return out + ")";
}

nlohmann::json point_to_json(const Point& p) {
  auto arr = nlohmann::json::array();
  for (double v : p.coords) arr.push_back(format_real(v));
  return arr;
}

// MetricSpace / HyperbolicSpace ---------------------------------------------

std::vector<std::string> MetricSpace::coordinate_names() const {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < dimension(); ++i) names.push_back(fmt::format("x{}", i));
  return names;
}

double MetricSpace::distance(const Point& x, const Point& y) const {
  if (x.size() != dimension() || y.size() != dimension()) {
    throw DomainError(fmt::format("{}: expected points with {} coordinates, got {} and {}", kind(),
                                  dimension(), x.size(), y.size()));
  }
  return do_distance(x, y);
}

void MetricSpace::require_member(const Point& x, const std::string& what) const {
  if (x.size() != dimension() || !contains(x)) {
    throw DomainError(fmt::format("{}: {} {} is not a member", kind(), what, to_string(x)));
  }
}

Point HyperbolicSpace::convex_comb(const Point& x, const Point& y, double lambda) const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw ArgumentError(fmt::format("convex_comb: lambda {} outside [0,1]", lambda));
  }
  require_member(x, "convex_comb first argument");
  require_member(y, "convex_comb second argument");
  return do_combine(x, y, lambda);
}

// EuclideanSpace --------------------------------------------------------------

EuclideanSpace::EuclideanSpace(std::size_t n) : n_(n) {
  if (n == 0) throw ArgumentError("euclidean: dimension must be at least 1");
}

bool EuclideanSpace::contains(const Point& x) const { return x.size() == n_ && all_finite(x); }

Point EuclideanSpace::sample(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> coord(-10.0, 10.0);
  Point p;
  p.coords.resize(n_);
  for (auto& c : p.coords) c = coord(rng);
  return p;
}

nlohmann::json EuclideanSpace::descriptor() const { return {{"kind", "euclidean"}, {"n", n_}}; }

std::vector<std::string> EuclideanSpace::coordinate_names() const {
  if (n_ == 1) return {"x"};
  return MetricSpace::coordinate_names();
}

double EuclideanSpace::do_distance(const Point& x, const Point& y) const {
  if (n_ == 1) return std::abs(x[0] - y[0]);
  double sum = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    const double d = x[i] - y[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

Point EuclideanSpace::do_combine(const Point& x, const Point& y, double lambda) const {
  Point out;
  out.coords.resize(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = (1.0 - lambda) * x[i] + lambda * y[i];
  return out;
}

// Interval --------------------------------------------------------------------

Interval::Interval(double a, double b) : a_(a), b_(b) {
  if (std::isnan(a) || std::isnan(b) || !(a < b) || a == kInf || b == -kInf) {
    throw ArgumentError(fmt::format("interval: need a < b, got [{}, {}]", a, b));
  }
}

bool Interval::bounded() const { return std::isfinite(a_) && std::isfinite(b_); }

bool Interval::contains(const Point& x) const {
  return x.size() == 1 && std::isfinite(x[0]) && x[0] >= a_ - kBoundarySlack &&
         x[0] <= b_ + kBoundarySlack;
}

Point Interval::sample(std::mt19937_64& rng) const {
  double lo = a_;
  double hi = b_;
  if (!std::isfinite(lo) && !std::isfinite(hi)) {
    lo = -10.0;
    hi = 10.0;
  } else if (!std::isfinite(hi)) {
    hi = lo + 20.0;
  } else if (!std::isfinite(lo)) {
    lo = hi - 20.0;
  }
  return Point{std::uniform_real_distribution<double>(lo, hi)(rng)};
}

nlohmann::json Interval::descriptor() const {
  return {{"kind", "interval"}, {"a", bound_to_json(a_)}, {"b", bound_to_json(b_)}};
}

std::optional<double> Interval::diameter() const {
  if (!bounded()) return std::nullopt;
  return b_ - a_;
}

double Interval::do_distance(const Point& x, const Point& y) const { return std::abs(x[0] - y[0]); }

Point Interval::do_combine(const Point& x, const Point& y, double lambda) const {
  return Point{(1.0 - lambda) * x[0] + lambda * y[0]};
}

// PoincareDisk ------------------------------------------------------------------

bool PoincareDisk::contains(const Point& x) const {
  return x.size() == 2 && all_finite(x) && std::norm(as_complex(x)) < 1.0;
}

Point PoincareDisk::sample(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r = 0.9 * std::sqrt(unit(rng));
  const double theta = kTwoPi * unit(rng);
  return Point{r * std::cos(theta), r * std::sin(theta)};
}

nlohmann::json PoincareDisk::descriptor() const { return {{"kind", "poincare_disk"}}; }

double PoincareDisk::do_distance(const Point& x, const Point& y) const {
  // sinh(d/2) = |z − w| / sqrt((1 − |z|²)(1 − |w|²)), stable for nearby points.
  const auto z = as_complex(x);
  const auto w = as_complex(y);
  const double denom = std::sqrt((1.0 - std::norm(z)) * (1.0 - std::norm(w)));
  return 2.0 * std::asinh(std::abs(z - w) / denom);
}

Point PoincareDisk::do_combine(const Point& x, const Point& y, double lambda) const {
  if (lambda == 0.0) return x;
  if (lambda == 1.0) return y;
  const auto a = as_complex(x);
  const auto b = as_complex(y);
  // Translate x to the origin, move along the radius towards the image of y,
  // translate back.
  const auto moved = (b - a) / (1.0 - std::conj(a) * b);
  const double r = std::abs(moved);
  if (r == 0.0) return x;
  const double t = std::tanh(lambda * std::atanh(r));
  const auto m = moved * (t / r);
  const auto out = (m + a) / (1.0 + std::conj(a) * m);
  return Point{out.real(), out.imag()};
}

// StarTree ----------------------------------------------------------------------

StarTree::StarTree(std::size_t rays, double length) : rays_(rays), length_(length) {
  if (rays < 2) throw ArgumentError("star_tree: need at least 2 rays");
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw ArgumentError("star_tree: length must be positive and finite");
  }
}

Point StarTree::make_point(std::size_t ray, double offset) const {
  if (ray >= rays_) throw ArgumentError(fmt::format("star_tree: no ray {}", ray));
  if (offset <= 0.0) return Point{0.0, 0.0};
  return Point{static_cast<double>(ray), offset};
}

bool StarTree::contains(const Point& x) const {
  if (x.size() != 2 || !all_finite(x)) return false;
  const double ray = x[0];
  if (ray < 0.0 || ray != std::floor(ray) || ray >= static_cast<double>(rays_)) return false;
  return x[1] >= -kBoundarySlack && x[1] <= length_ + kBoundarySlack;
}

Point StarTree::sample(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (unit(rng) < 0.05) return Point{0.0, 0.0};
  const auto ray = std::uniform_int_distribution<std::size_t>(0, rays_ - 1)(rng);
  return make_point(ray, length_ * unit(rng));
}

nlohmann::json StarTree::descriptor() const {
  return {{"kind", "star_tree"}, {"rays", rays_}, {"length", length_}};
}

double StarTree::do_distance(const Point& x, const Point& y) const {
  const double s = std::max(x[1], 0.0);
  const double t = std::max(y[1], 0.0);
  if (x[0] == y[0] || s == 0.0 || t == 0.0) return std::abs(s - t);
  return s + t;
}

Point StarTree::do_combine(const Point& x, const Point& y, double lambda) const {
  if (lambda == 0.0) return x;
  if (lambda == 1.0) return y;
  const double s = std::max(x[1], 0.0);
  const double t = std::max(y[1], 0.0);
  if (x[0] == y[0] || s == 0.0 || t == 0.0) {
    // Geodesic stays on one ray (or passes through the hub only at an end).
    const double ray = s == 0.0 ? y[0] : x[0];
    const double offset = (1.0 - lambda) * s + lambda * t;
    if (offset <= 0.0) return Point{0.0, 0.0};
    return Point{ray, offset};
  }
  const double travelled = lambda * (s + t);
  if (travelled <= s) {
    const double offset = s - travelled;
    return offset <= 0.0 ? Point{0.0, 0.0} : Point{x[0], offset};
  }
  return Point{y[0], travelled - s};
}

// Circle --------------------------------------------------------------------------

bool Circle::contains(const Point& x) const {
  return x.size() == 1 && std::isfinite(x[0]) && x[0] >= -kBoundarySlack &&
         x[0] < kTwoPi + kBoundarySlack;
}

Point Circle::sample(std::mt19937_64& rng) const {
  return Point{std::uniform_real_distribution<double>(0.0, kTwoPi)(rng)};
}

nlohmann::json Circle::descriptor() const { return {{"kind", "circle"}}; }

std::optional<double> Circle::diameter() const { return std::numbers::pi; }

double Circle::do_distance(const Point& x, const Point& y) const {
  const double d = std::fmod(std::abs(x[0] - y[0]), kTwoPi);
  return std::min(d, kTwoPi - d);
}

// BrokenW -------------------------------------------------------------------------

BrokenW::BrokenW(HyperbolicPtr base) : base_(std::move(base)) {
  if (!base_) throw ArgumentError("broken_w: null base space");
}

nlohmann::json BrokenW::descriptor() const {
  return {{"kind", "broken_w"}, {"base", base_->descriptor()}};
}

double BrokenW::do_distance(const Point& x, const Point& y) const { return base_->distance(x, y); }

// Factories -------------------------------------------------------------------------

std::shared_ptr<const EuclideanSpace> make_euclidean(std::size_t n) {
  return std::make_shared<const EuclideanSpace>(n);
}

std::shared_ptr<const Interval> make_interval(double a, double b) {
  return std::make_shared<const Interval>(a, b);
}

std::shared_ptr<const PoincareDisk> make_poincare_disk() {
  return std::make_shared<const PoincareDisk>();
}

std::shared_ptr<const StarTree> make_star_tree(std::size_t rays, double length) {
  return std::make_shared<const StarTree>(rays, length);
}

std::shared_ptr<const Circle> make_circle() { return std::make_shared<const Circle>(); }

std::shared_ptr<const BrokenW> make_broken_w(HyperbolicPtr base) {
  return std::make_shared<const BrokenW>(std::move(base));
}

// ProductSpace ------------------------------------------------------------------------

ProductSpace::ProductSpace(SpacePtr left, SpacePtr right)
    : left_(std::move(left)), right_(std::move(right)) {
  if (!left_ || !right_) throw ArgumentError("product: null component space");
}

std::size_t ProductSpace::dimension() const { return left_->dimension() + right_->dimension(); }

bool ProductSpace::contains(const Point& p) const {
  if (p.size() != dimension()) return false;
  const auto [x, u] = split(p);
  return contains_pair(x, u);
}

bool ProductSpace::contains_pair(const Point& x, const Point& u) const {
  if (u.size() != right_->dimension() || !right_->contains(u)) return false;
  const auto c = fiber(u);
  return x.size() == c->dimension() && c->contains(x);
}

HyperbolicPtr ProductSpace::fiber(const Point&) const {
  auto c = std::dynamic_pointer_cast<const HyperbolicSpace>(left_);
  if (!c) {
    throw ArgumentError(
        fmt::format("product: first factor '{}' has no convexity structure", left_->kind()));
  }
  return c;
}

Point ProductSpace::sample(std::mt19937_64& rng) const {
  Point x = left_->sample(rng);
  Point u = right_->sample(rng);
  return join(x, u);
}

nlohmann::json ProductSpace::descriptor() const {
  return {{"kind", "product"}, {"left", left_->descriptor()}, {"right", right_->descriptor()}};
}

std::vector<std::string> ProductSpace::coordinate_names() const {
  std::vector<std::string> names;
  for (const auto& n : left_->coordinate_names()) names.push_back("c_" + n);
  for (const auto& n : right_->coordinate_names()) names.push_back("m_" + n);
  return names;
}

Point ProductSpace::join(const Point& x, const Point& u) const {
  if (x.size() != left_->dimension() || u.size() != right_->dimension()) {
    throw DomainError(fmt::format("product: cannot join {} and {}", to_string(x), to_string(u)));
  }
  Point p;
  p.coords.reserve(x.size() + u.size());
  p.coords.insert(p.coords.end(), x.coords.begin(), x.coords.end());
  p.coords.insert(p.coords.end(), u.coords.begin(), u.coords.end());
  return p;
}

std::pair<Point, Point> ProductSpace::split(const Point& p) const {
  if (p.size() != dimension()) {
    throw DomainError(fmt::format("product: point {} has wrong dimension", to_string(p)));
  }
  const auto k = static_cast<std::ptrdiff_t>(left_->dimension());
  return {Point(std::vector<double>(p.coords.begin(), p.coords.begin() + k)),
          Point(std::vector<double>(p.coords.begin() + k, p.coords.end()))};
}

Point ProductSpace::first(const Point& p) const { return split(p).first; }
Point ProductSpace::second(const Point& p) const { return split(p).second; }

double ProductSpace::do_distance(const Point& p, const Point& q) const {
  const auto [x, u] = split(p);
  const auto [y, v] = split(q);
  return std::max(left_->distance(x, y), right_->distance(u, v));
}

std::shared_ptr<const ProductSpace> product(SpacePtr c, SpacePtr m) {
  return std::make_shared<const ProductSpace>(std::move(c), std::move(m));
}

// Axiom checks --------------------------------------------------------------------------

bool AxiomReport::passed() const {
  return std::all_of(results.begin(), results.end(), [](const AxiomResult& r) { return r.passed; });
}

const AxiomResult* AxiomReport::find(const std::string& name) const {
  for (const auto& r : results) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

nlohmann::json AxiomReport::to_json() const {
  nlohmann::json out = {{"space", space_kind}, {"eta", eta}, {"passed", passed()}};
  auto list = nlohmann::json::array();
  for (const auto& r : results) {
    nlohmann::json entry = {{"axiom", r.name},
                            {"checked", r.checked},
                            {"max_violation", format_real(r.max_violation)},
                            {"passed", r.passed}};
    if (r.counterexample) entry["counterexample"] = *r.counterexample;
    list.push_back(entry);
  }
  out["axioms"] = list;
  return out;
}

namespace {

class ViolationTracker {
 public:
  ViolationTracker(std::string name, double eta) : eta_(eta) { result_.name = std::move(name); }

  template <typename Describe>
  void record(double violation, Describe&& describe) {
    ++result_.checked;
    if (std::isnan(violation)) violation = std::numeric_limits<double>::infinity();
    result_.max_violation = std::max(result_.max_violation, violation);
    if (violation > eta_ && !result_.counterexample) {
      result_.counterexample = describe();
      result_.passed = false;
    }
  }

  AxiomResult take() { return std::move(result_); }

 private:
  double eta_;
  AxiomResult result_;
};

double sample_lambda(std::mt19937_64& rng, std::size_t i) {
  if (i % 17 == 0) return 0.0;
  if (i % 17 == 1) return 1.0;
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

void append_metric_checks(const MetricSpace& s, std::size_t samples, std::mt19937_64& rng,
                          double eta, AxiomReport& report) {
  ViolationTracker identity("metric:identity", eta);
  ViolationTracker nonneg("metric:nonnegativity", eta);
  ViolationTracker symmetry("metric:symmetry", eta);
  ViolationTracker triangle("metric:triangle", eta);
  for (std::size_t i = 0; i < samples; ++i) {
    const Point x = s.sample(rng);
    const Point y = s.sample(rng);
    const Point z = s.sample(rng);
    const double dxy = s.distance(x, y);
    identity.record(s.distance(x, x), [&] { return "x=" + to_string(x); });
    nonneg.record(-dxy, [&] { return "x=" + to_string(x) + " y=" + to_string(y); });
    symmetry.record(std::abs(dxy - s.distance(y, x)),
                    [&] { return "x=" + to_string(x) + " y=" + to_string(y); });
    triangle.record(s.distance(x, z) - dxy - s.distance(y, z), [&] {
      return "x=" + to_string(x) + " y=" + to_string(y) + " z=" + to_string(z);
    });
  }
  report.results.push_back(identity.take());
  report.results.push_back(nonneg.take());
  report.results.push_back(symmetry.take());
  report.results.push_back(triangle.take());
}

}  // namespace

AxiomReport check_metric_axioms(const MetricSpace& s, std::size_t samples, std::uint64_t seed,
                                double eta) {
  if (samples == 0) throw ArgumentError("check_axioms: samples must be at least 1");
  AxiomReport report;
  report.space_kind = s.kind();
  report.eta = eta;
  std::mt19937_64 rng(seed);
  append_metric_checks(s, samples, rng, eta, report);
  return report;
}

AxiomReport check_axioms(const HyperbolicSpace& s, std::size_t samples, std::uint64_t seed,
                         double eta) {
  AxiomReport report = check_metric_axioms(s, samples, seed, eta);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);

  ViolationTracker endpoints("W:endpoints", eta);
  ViolationTracker w1("W1", eta);
  ViolationTracker w2("W2", eta);
  ViolationTracker w3("W3", eta);
  ViolationTracker w4("W4", eta);

  for (std::size_t i = 0; i < samples; ++i) {
    const Point x = s.sample(rng);
    const Point y = s.sample(rng);
    const Point z = s.sample(rng);
    const Point w = s.sample(rng);
    const double lambda = sample_lambda(rng, i);
    const double mu = sample_lambda(rng, i + 5);
    const auto describe = [&] {
      return fmt::format("x={} y={} z={} w={} lambda={} mu={}", to_string(x), to_string(y),
                         to_string(z), to_string(w), format_real(lambda), format_real(mu));
    };

    const Point xy = s.convex_comb(x, y, lambda);
    endpoints.record(std::max(s.distance(s.convex_comb(x, y, 0.0), x),
                              s.distance(s.convex_comb(x, y, 1.0), y)),
                     describe);
    w1.record(s.distance(z, xy) - ((1.0 - lambda) * s.distance(z, x) + lambda * s.distance(z, y)),
              describe);
    w2.record(std::abs(s.distance(xy, s.convex_comb(x, y, mu)) -
                       std::abs(lambda - mu) * s.distance(x, y)),
              describe);
    w3.record(s.distance(xy, s.convex_comb(y, x, 1.0 - lambda)), describe);
    w4.record(s.distance(s.convex_comb(x, z, lambda), s.convex_comb(y, w, lambda)) -
                  ((1.0 - lambda) * s.distance(x, y) + lambda * s.distance(z, w)),
              describe);
  }
  report.results.push_back(endpoints.take());
  report.results.push_back(w1.take());
  report.results.push_back(w2.take());
  report.results.push_back(w3.take());
  report.results.push_back(w4.take());
  return report;
}

// Descriptors ---------------------------------------------------------------------------

SpacePtr space_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw ConfigError("space descriptor needs a string 'kind'");
  }
  const auto kind = j.at("kind").get<std::string>();
  try {
    if (kind == "euclidean") return make_euclidean(j.value("n", std::size_t{1}));
    if (kind == "interval") return make_interval(bound_from_json(j, "a"), bound_from_json(j, "b"));
    if (kind == "real_line") return make_interval(-kInf, kInf);
    if (kind == "poincare_disk") return make_poincare_disk();
    if (kind == "star_tree") {
      return make_star_tree(j.value("rays", std::size_t{3}), j.value("length", 1.0));
    }
    if (kind == "circle") return make_circle();
    if (kind == "broken_w") {
      if (!j.contains("base")) throw ConfigError("broken_w: missing 'base'");
      return make_broken_w(hyperbolic_space_from_json(j.at("base")));
    }
    if (kind == "product") {
      if (!j.contains("left") || !j.contains("right")) {
        throw ConfigError("product: needs 'left' and 'right'");
      }
      return product(space_from_json(j.at("left")), space_from_json(j.at("right")));
    }
  } catch (const ArgumentError& e) {
    throw ConfigError(e.what());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("space '{}': {}", kind, e.what()));
  }
  throw ConfigError(fmt::format("unknown space kind '{}'", kind));
}

HyperbolicPtr hyperbolic_space_from_json(const nlohmann::json& j) {
  auto s = std::dynamic_pointer_cast<const HyperbolicSpace>(space_from_json(j));
  if (!s) throw ConfigError("space '" + j.value("kind", std::string{}) + "' has no convexity structure");
  return s;
}

}  // namespace kmfp
