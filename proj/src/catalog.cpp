#include "kmfp/catalog.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "kmfp/errors.hpp"

namespace kmfp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string kind_of(const nlohmann::json& j, const char* what) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw ConfigError(fmt::format("{} descriptor needs a string 'kind'", what));
  }
  return j.at("kind").get<std::string>();
}

double field(const nlohmann::json& j, const char* key, double fallback) {
  return j.contains(key) ? real_from_json(j.at(key)) : fallback;
}

double required(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(fmt::format("missing field '{}'", key));
  return real_from_json(j.at(key));
}

void require_dimension(const SpacePtr& s, std::size_t n, const std::string& what) {
  if (s->dimension() != n) {
    throw ConfigError(fmt::format("{} needs a {}-dimensional space, got '{}' of dimension {}", what,
                                  n, s->kind(), s->dimension()));
  }
}

void require_linear(const SpacePtr& s, const std::string& what) {
  const auto kind = s->kind();
  if (kind != "euclidean" && kind != "interval") {
    throw ConfigError(what + " is only defined on euclidean spaces and intervals");
  }
}

// Operator norm of a matrix via power iteration on AᵀA, slightly inflated.
double spectral_norm(const std::vector<std::vector<double>>& a) {
  const std::size_t n = a.size();
  std::vector<double> v(n, 1.0);
  double norm = 0.0;
  for (int it = 0; it < 500; ++it) {
    std::vector<double> av(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) av[i] += a[i][j] * v[j];
    std::vector<double> atav(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) atav[j] += a[i][j] * av[i];
    double len = 0.0;
    for (double x : atav) len += x * x;
    len = std::sqrt(len);
    if (len == 0.0) return 0.0;
    for (std::size_t i = 0; i < n; ++i) v[i] = atav[i] / len;
    norm = std::sqrt(len);
  }
  return norm;
}

NonexpansiveMap affine_map(const nlohmann::json& j, const SpacePtr& domain) {
  require_linear(domain, "affine map");
  const std::size_t n = domain->dimension();
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  std::vector<double> c(n, 0.0);
  if (j.contains("matrix")) {
    const auto& m = j.at("matrix");
    if (!m.is_array() || m.size() != n) throw ConfigError("affine: matrix has the wrong shape");
    for (std::size_t i = 0; i < n; ++i) {
      if (!m[i].is_array() || m[i].size() != n) throw ConfigError("affine: matrix has the wrong shape");
      for (std::size_t k = 0; k < n; ++k) a[i][k] = real_from_json(m[i][k]);
    }
    if (j.contains("offset")) c = point_from_json(j.at("offset")).coords;
  } else {
    require_dimension(domain, 1, "scalar affine map");
    a[0][0] = required(j, "a");
    c[0] = field(j, "c", 0.0);
  }
  if (c.size() != n) throw ConfigError("affine: offset has the wrong dimension");
  if (spectral_norm(a) > 1.0 + 1e-12) throw ConfigError("affine: matrix norm exceeds 1");
  auto fn = [a, c](const Point& x) {
    Point y(c);
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t k = 0; k < c.size(); ++k) y[i] += a[i][k] * x[k];
    return y;
  };
  return NonexpansiveMap(domain, std::move(fn), "affine");
}

std::shared_ptr<const Interval> bounded_interval(const SpacePtr& m, const char* what) {
  auto interval = std::dynamic_pointer_cast<const Interval>(m);
  if (!interval) throw ConfigError(fmt::format("{} oracle needs an interval M", what));
  return interval;
}

}  // namespace

double real_from_json(const nlohmann::json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
    try {
      return to_double(parse_rational(s));
    } catch (const ArgumentError& e) {
      throw ConfigError(e.what());
    }
  }
  throw ConfigError("expected a number, got " + v.dump());
}

Rational rational_from_json(const nlohmann::json& v) {
  try {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_unsigned()) return Rational(BigInt(v.get<std::uint64_t>()));
    if (v.is_number_integer()) return Rational(BigInt(v.get<std::int64_t>()));
    if (v.is_number()) return rational_from_double(v.get<double>());
  } catch (const ArgumentError& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("expected a rational, got " + v.dump());
}

Point point_from_json(const nlohmann::json& v) {
  if (!v.is_array()) return Point{real_from_json(v)};
  Point p;
  for (const auto& c : v) p.coords.push_back(real_from_json(c));
  return p;
}

NonexpansiveMap map_from_json(const nlohmann::json& j, const SpacePtr& domain) {
  const auto kind = kind_of(j, "map");
  try {
    if (kind == "identity") {
      return NonexpansiveMap(domain, [](const Point& x) { return x; }, "identity");
    }
    if (kind == "constant") {
      const Point c = point_from_json(j.at("point"));
      domain->require_member(c, "constant map value");
      return NonexpansiveMap(domain, [c](const Point&) { return c; }, "constant " + to_string(c));
    }
    if (kind == "translate") {
      require_linear(domain, "translate");
      const Point s = point_from_json(j.at("shift"));
      if (s.size() != domain->dimension()) throw ConfigError("translate: shift has the wrong dimension");
      auto fn = [s](const Point& x) {
        Point y = x;
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += s[i];
        return y;
      };
      return NonexpansiveMap(domain, std::move(fn), "translate " + to_string(s));
    }
    if (kind == "affine") return affine_map(j, domain);
    if (kind == "clamped_translate") {
      require_linear(domain, "clamped_translate");
      require_dimension(domain, 1, "clamped_translate");
      const double shift = required(j, "shift");
      const double lo = field(j, "lo", -kInf);
      const double hi = field(j, "hi", kInf);
      if (!(lo <= hi)) throw ConfigError("clamped_translate: lo > hi");
      auto fn = [shift, lo, hi](const Point& x) { return Point{std::clamp(x[0] + shift, lo, hi)}; };
      return NonexpansiveMap(domain, std::move(fn), fmt::format("clamp(x{:+},[{},{}])", shift, lo, hi));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("map '{}': {}", kind, e.what()));
  }
  throw ConfigError("unknown map kind '" + kind + "'");
}

ProductMap product_map_from_json(const nlohmann::json& j, const ProductPtr& h) {
  const auto kind = kind_of(j, "product map");
  const auto scalar = [&] {
    require_dimension(h->left(), 1, "product map '" + kind + "'");
    require_dimension(h->right(), 1, "product map '" + kind + "'");
  };
  try {
    if (kind == "diagonal_average") {
      scalar();
      auto fn = [](const Point& x, const Point& u) {
        return std::pair{Point{(x[0] + u[0]) / 2.0}, Point{x[0]}};
      };
      return ProductMap(h, std::move(fn), "((x+u)/2, x)");
    }
    if (kind == "constant") {
      const Point cx = point_from_json(j.at("x"));
      const Point cu = point_from_json(j.at("u"));
      if (!h->contains_pair(cx, cu)) throw ConfigError("constant product map: value outside H");
      return ProductMap(
          h, [cx, cu](const Point&, const Point&) { return std::pair{cx, cu}; },
          fmt::format("const({}, {})", to_string(cx), to_string(cu)));
    }
    if (kind == "coordinatewise") {
      const auto f = map_from_json(j.at("first"), h->left());
      const auto g = map_from_json(j.at("second"), h->right());
      return ProductMap(
          h, [f, g](const Point& x, const Point& u) { return std::pair{f(x), g(u)}; },
          fmt::format("({}, {})", f.label(), g.label()));
    }
    if (kind == "affine_mix") {
      scalar();
      const double a = field(j, "a", 0), b = field(j, "b", 0), c = field(j, "c", 0);
      const double d = field(j, "d", 0), e = field(j, "e", 0), f = field(j, "f", 0);
      const double lo = field(j, "lo", -kInf), hi = field(j, "hi", kInf);
      // Nonexpansive for d∞ iff each row has absolute sum at most 1.
      if (std::abs(a) + std::abs(b) > 1 + 1e-12 || std::abs(d) + std::abs(e) > 1 + 1e-12) {
        throw ConfigError("affine_mix: a row has absolute sum above 1");
      }
      auto fn = [=](const Point& x, const Point& u) {
        return std::pair{Point{std::clamp(a * x[0] + b * u[0] + c, lo, hi)},
                         Point{d * x[0] + e * u[0] + f}};
      };
      return ProductMap(h, std::move(fn),
                        fmt::format("({}x{:+}u{:+}, {}x{:+}u{:+})", a, b, c, d, e, f));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("product map '{}': {}", kind, e.what()));
  }
  throw ConfigError("unknown product map kind '" + kind + "'");
}

SelectionFunction selection_from_json(const nlohmann::json& j, const SpacePtr& m,
                                      const SpacePtr& target) {
  const auto kind = kind_of(j, "selection");
  try {
    if (kind == "identity") {
      if (m->dimension() != target->dimension()) {
        throw ConfigError("identity selection: M and C have different dimensions");
      }
      return SelectionFunction(m, target, [](const Point& u) { return u; }, "identity");
    }
    if (kind == "constant") {
      const Point c = point_from_json(j.at("point"));
      if (c.size() != target->dimension()) throw ConfigError("constant selection: wrong dimension");
      return SelectionFunction(m, target, [c](const Point&) { return c; }, "constant " + to_string(c));
    }
    if (kind == "affine") {
      require_dimension(m, 1, "affine selection");
      require_dimension(target, 1, "affine selection");
      const double a = required(j, "a");
      const double c = field(j, "c", 0.0);
      if (std::abs(a) > 1) throw ConfigError("affine selection: |a| > 1 is not nonexpansive");
      return SelectionFunction(
          m, target, [a, c](const Point& u) { return Point{a * u[0] + c}; },
          fmt::format("{}u{:+}", a, c));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("selection '{}': {}", kind, e.what()));
  }
  throw ConfigError("unknown selection kind '" + kind + "'");
}

OraclePtr oracle_from_json(const nlohmann::json& j, const SpacePtr& m) {
  const auto kind = kind_of(j, "oracle");
  try {
    if (kind == "grid") {
      auto interval = bounded_interval(m, "grid");
      if (!interval->bounded()) throw ConfigError("grid oracle needs a bounded interval M");
      return std::make_shared<const GridOracle>(interval, j.value("cells", std::size_t{32}),
                                                j.value("levels", std::size_t{60}));
    }
    if (kind == "affine") return std::make_shared<const AffineOracle>(bounded_interval(m, "affine"));
    if (kind == "km") {
      auto hm = std::dynamic_pointer_cast<const HyperbolicSpace>(m);
      if (!hm) throw ConfigError("km oracle needs a hyperbolic M");
      Point start;
      if (j.contains("start")) {
        start = point_from_json(j.at("start"));
      } else {
        std::mt19937_64 rng(0);
        start = hm->sample(rng);
      }
      return std::make_shared<const KmOracle>(hm, j.value("max_steps", std::size_t{100000}), start);
    }
  } catch (const ArgumentError& e) {
    throw ConfigError(e.what());
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("oracle '{}': {}", kind, e.what()));
  }
  throw ConfigError("unknown oracle kind '" + kind + "'");
}

ProductPtr product_space_from_json(const nlohmann::json& j, const nlohmann::json& selection,
                                   std::uint64_t seed) {
  const auto kind = kind_of(j, "product space");
  try {
    if (kind == "product") {
      auto h = product(space_from_json(j.at("C")), space_from_json(j.at("M")));
      h->fiber(Point{});  // C must be hyperbolic
      return h;
    }
    if (kind == "family") {
      const auto ambient = hyperbolic_space_from_json(j.at("ambient"));
      const auto m = space_from_json(j.at("M"));
      const auto& fibers = j.at("fibers");
      const auto fkind = kind_of(fibers, "fibers");
      FamilyProduct::FiberFn c_of;
      if (fkind == "constant") {
        const auto c = hyperbolic_space_from_json(fibers.at("space"));
        c_of = [c](const Point&) { return c; };
      } else if (fkind == "interval_family") {
        require_dimension(ambient, 1, "interval family");
        require_dimension(m, 1, "interval family");
        const double lo = field(fibers, "lo", -kInf), lo_slope = field(fibers, "lo_slope", 0);
        const double hi = field(fibers, "hi", kInf), hi_slope = field(fibers, "hi_slope", 0);
        c_of = [=](const Point& u) -> HyperbolicPtr {
          const double a = std::isfinite(lo) ? lo + lo_slope * u[0] : lo;
          const double b = std::isfinite(hi) ? hi + hi_slope * u[0] : hi;
          return make_interval(a, b);
        };
      } else {
        throw ConfigError("unknown fibers kind '" + fkind + "'");
      }
      const auto delta = selection_from_json(selection, m, ambient);
      return family_product(ambient, m, std::move(c_of), fibers, delta, 256, seed);
    }
  } catch (const ArgumentError& e) {
    throw ConfigError(e.what());
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(fmt::format("product space '{}': {}", kind, e.what()));
  }
  throw ConfigError("unknown product space kind '" + kind + "'");
}

Probe probe_from_json(const nlohmann::json& j, const ProductProblem& problem) {
  const auto kind = kind_of(j, "probe");
  if (kind == "selection") return [delta = problem.delta](const Point& u) { return delta(u); };
  if (kind == "parameter") return [](const Point& u) { return u; };
  if (kind == "constant") {
    const Point c = point_from_json(j.at("point"));
    return [c](const Point&) { return c; };
  }
  if (kind == "km") {
    const auto steps = j.value("steps", std::size_t{1000});
    return [problem, steps](const Point& u) {
      const auto c = problem.map.domain()->fiber(u);
      return km_point(*c, slice(problem.map, u), problem.delta(u), problem.schedule, steps);
    };
  }
  throw ConfigError("unknown probe kind '" + kind + "'");
}

}  // namespace kmfp
