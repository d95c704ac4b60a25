#include "kmfp/oracles.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "kmfp/errors.hpp"
#include "kmfp/numeric.hpp"

namespace kmfp {

Point AfppOracle::solve(const NonexpansiveMap& f, double eps) const {
  if (!(eps > 0)) throw ArgumentError("oracle: tolerance must be positive");
  if (f.domain()->dimension() != space_->dimension()) {
    throw ArgumentError(fmt::format("oracle '{}': map '{}' is not a self-map of its space", name(),
                                    f.label()));
  }
  const Point u = search(f, eps);
  if (!space_->contains(u)) {
    throw OracleFailure(fmt::format("oracle '{}' returned {} outside its space", name(), to_string(u)));
  }
  const double residual = space_->distance(u, f(u));
  if (residual > eps) {
    throw OracleFailure(fmt::format("oracle '{}' on '{}': best residual {} exceeds tolerance {}",
                                    name(), f.label(), format_real(residual), format_real(eps)));
  }
  return u;
}

GridOracle::GridOracle(std::shared_ptr<const Interval> space, std::size_t cells, std::size_t levels)
    : AfppOracle(space), cells_(cells), levels_(levels) {
  if (!space->bounded()) throw ArgumentError("grid oracle needs a bounded interval");
  if (cells < 2 || levels < 1) throw ArgumentError("grid oracle: need cells >= 2 and levels >= 1");
  a_ = space->lower();
  b_ = space->upper();
}

nlohmann::json GridOracle::descriptor() const {
  return {{"kind", "grid"}, {"cells", cells_}, {"levels", levels_}};
}

Point GridOracle::search(const NonexpansiveMap& f, double eps) const {
  double lo = a_;
  double hi = b_;
  Point best{lo};
  double best_gap = INFINITY;
  for (std::size_t level = 0; level < levels_; ++level) {
    const double width = (hi - lo) / static_cast<double>(cells_);
    double prev_x = lo;
    double prev_g = 0.0;
    bool zoomed = false;
    for (std::size_t i = 0; i <= cells_; ++i) {
      const double x = i == cells_ ? hi : lo + width * static_cast<double>(i);
      const double g = f(Point{x})[0] - x;
      if (std::abs(g) < best_gap) {
        best_gap = std::abs(g);
        best = Point{x};
      }
      if (best_gap <= eps) return best;
      if (i > 0 && prev_g > 0 && g < 0) {
        lo = prev_x;
        hi = x;
        zoomed = true;
        break;
      }
      prev_x = x;
      prev_g = g;
    }
    if (!zoomed) break;  // only possible through rounding at the ends
  }
  return best;
}

AffineOracle::AffineOracle(std::shared_ptr<const Interval> space)
    : AfppOracle(space), interval_(std::move(space)) {}

Point AffineOracle::search(const NonexpansiveMap& f, double) const {
  const double lo = std::isfinite(interval_->lower()) ? interval_->lower()
                                                      : std::min(0.0, interval_->upper() - 1.0);
  const double hi = std::isfinite(interval_->upper()) ? interval_->upper() : lo + 1.0;
  const double f_lo = f(Point{lo})[0];
  const double f_hi = f(Point{hi})[0];
  const double a = (f_hi - f_lo) / (hi - lo);
  const double c = f_lo - a * lo;
  if (std::abs(1.0 - a) < 1e-15) return Point{lo};  // a translation: fixed everywhere or nowhere
  double x = c / (1.0 - a);
  x = std::clamp(x, interval_->lower(), interval_->upper());
  return Point{x};
}

KmOracle::KmOracle(HyperbolicPtr space, std::size_t max_steps, Point start)
    : AfppOracle(space), hyperbolic_(std::move(space)), max_steps_(max_steps), start_(std::move(start)) {
  hyperbolic_->require_member(start_, "km oracle start");
}

nlohmann::json KmOracle::descriptor() const {
  return {{"kind", "km"}, {"max_steps", max_steps_}, {"start", point_to_json(start_)}};
}

Point KmOracle::search(const NonexpansiveMap& f, double eps) const {
  Point x = start_;
  for (std::size_t k = 0; k < max_steps_; ++k) {
    const Point fx = f(x);
    if (hyperbolic_->distance(x, fx) <= eps) return x;
    x = hyperbolic_->convex_comb(x, fx, 0.5);
  }
  return x;
}

}  // namespace kmfp
