#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "kmfp/numeric.hpp"
#include "kmfp/spaces.hpp"

// Small seeded generators for property tests. Every property runs a fixed
// number of cases from a fixed seed, so failures reproduce exactly.

namespace kmfp::gen {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }

  // Small positive rational p/q.
  Rational positive_rational(long max_num = 40, long max_den = 12) {
    return Rational(integer(1, max_num), integer(1, max_den));
  }

  // Mix of generic values and the ones that break things: endpoints, 0, 1, tiny.
  double lambda() {
    switch (integer(0, 5)) {
      case 0: return 0.0;
      case 1: return 1.0;
      case 2: return 0.5;
      case 3: return uniform(0.0, 1e-6);
      default: return uniform(0.0, 1.0);
    }
  }

  Point sample(const MetricSpace& s) { return s.sample(rng_); }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

template <typename Body>
void for_cases(std::uint64_t seed, int cases, Body&& body) {
  Gen g(seed);
  for (int k = 0; k < cases; ++k) body(g, k);
}

}  // namespace kmfp::gen
