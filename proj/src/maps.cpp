#include "kmfp/maps.hpp"

#include <random>

#include <fmt/format.h>

#include "kmfp/errors.hpp"
#include "kmfp/km_engine.hpp"

namespace kmfp {

NonexpansiveMap::NonexpansiveMap(SpacePtr domain, PointFn fn, std::string label)
    : NonexpansiveMap(domain, domain, std::move(fn), std::move(label)) {}

NonexpansiveMap::NonexpansiveMap(SpacePtr domain, SpacePtr codomain, PointFn fn, std::string label)
    : domain_(std::move(domain)),
      codomain_(std::move(codomain)),
      fn_(std::move(fn)),
      label_(std::move(label)) {
  if (!domain_ || !codomain_ || !fn_) throw ArgumentError("map '" + label_ + "': incomplete");
}

Point NonexpansiveMap::operator()(const Point& x) const {
  domain_->require_member(x, "argument of " + label_);
  return fn_(x);
}

ProductMap::ProductMap(ProductPtr domain, ProductFn fn, std::string label)
    : domain_(std::move(domain)), fn_(std::move(fn)), label_(std::move(label)) {
  if (!domain_ || !fn_) throw ArgumentError("product map '" + label_ + "': incomplete");
}

std::pair<Point, Point> ProductMap::operator()(const Point& x, const Point& u) const {
  if (!domain_->contains_pair(x, u)) {
    throw DomainError(fmt::format("{}: ({}, {}) is not in the domain", label_, to_string(x),
                                  to_string(u)));
  }
  return fn_(x, u);
}

Point ProductMap::apply(const Point& p) const {
  const auto [x, u] = domain_->split(p);
  const auto [tx, tu] = (*this)(x, u);
  return domain_->join(tx, tu);
}

NonexpansiveMap ProductMap::as_map() const {
  return NonexpansiveMap(
      domain_, [self = *this](const Point& p) { return self.apply(p); }, label_);
}

NonexpansiveMap slice(const ProductMap& t, const Point& u) {
  const auto& m = t.domain()->right();
  m->require_member(u, "slice parameter of " + t.label());
  return NonexpansiveMap(
      t.domain()->fiber(u), [t, u](const Point& x) { return t(x, u).first; },
      t.label() + "|u=" + to_string(u));
}

NonexpansiveMap phi(const ProductMap& t, const SelectionFunction& delta, const Schedule& sched,
                    std::size_t n) {
  auto fn = [t, delta, sched, n](const Point& u) {
    const auto tu = slice(t, u);
    const auto c = t.domain()->fiber(u);
    const Point start = delta(u);
    if (!c->contains(start)) {
      throw DomainError(fmt::format("selection {} maps {} to {} outside its fiber", delta.label(),
                                    to_string(u), to_string(start)));
    }
    const Point xn = km_point(*c, tu, start, sched, n);
    return t(xn, u).second;
  };
  return NonexpansiveMap(t.domain()->right(), std::move(fn),
                         fmt::format("phi_{}[{}]", n, t.label()));
}

std::optional<Counterexample> falsify_nonexpansive(const NonexpansiveMap& f, std::size_t trials,
                                                   std::uint64_t seed, double eta) {
  if (trials == 0) throw ArgumentError("falsify_nonexpansive: trials must be at least 1");
  std::mt19937_64 rng(seed);
  const auto& dom = *f.domain();
  const auto& cod = *f.codomain();
  for (std::size_t i = 0; i < trials; ++i) {
    const Point x = dom.sample(rng);
    const Point y = dom.sample(rng);
    const double d = dom.distance(x, y);
    const double fd = cod.distance(f(x), f(y));
    if (fd > d + eta) return Counterexample{x, y, d, fd};
  }
  return std::nullopt;
}

}  // namespace kmfp
