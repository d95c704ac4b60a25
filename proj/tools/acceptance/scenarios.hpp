#pragma once

#include <array>
#include <random>

#include <nlohmann/json.hpp>

#include "kmfp/km_engine.hpp"
#include "kmfp/maps.hpp"
#include "kmfp/product_afpp.hpp"

// Fixed examples and random generators shared by the acceptance suite and the
// test binaries.

namespace kmfp::scenarios {

/// λₙ ≡ 1/2 with K = 2, α(n) = 2n.
Schedule half_schedule();

/// ((x+u)/2, x) on [0,1]×[0,1], δ = identity, grid oracle. Every (u,u) is fixed.
ProductProblem diagonal_problem();

/// (x+1, 1−u) on ℝ×[0,1], δ = identity. Every slice is a unit translation,
/// so sup_u r_C(T_u) = 1.
ProductProblem translation_problem();

/// (max(x−1,0), u) on [0,10]×[0,1], δ ≡ 5. 0 is fixed by every slice.
ProductProblem clamped_problem();

/// The diagonal example over the constant family C_u ≡ [0,1].
ProductProblem diagonal_family_problem();

/// (x+u, u) over C_u = [0, 1+u]. P₁T leaves C_u at every (x,u) with x > 1.
ProductMap escaping_family_map();

/// CLI config of the diagonal example (bounded-orbit mode, ε = 1/100).
nlohmann::json diagonal_config();

struct Affine2 {
  std::array<std::array<double, 2>, 2> a{};
  std::array<double, 2> c{};
  Point operator()(const Point& x) const;
};

/// Affine map with operator norm ≤ 1 and row sums ≤ 1 that sends [0,1]² into
/// itself, hence a nonexpansive self-map of the square.
Affine2 random_square_affine(std::mt19937_64& rng);
NonexpansiveMap as_map(const Affine2& f);
Point random_square_point(std::mt19937_64& rng);

/// Coefficients of (ax+bu+c, dx+eu+f) mapping [0,1]² into itself with
/// |a|+|b| ≤ 1 and |d|+|e| ≤ 1, i.e. d∞-nonexpansive.
ProductMap random_product_map(std::mt19937_64& rng);

}  // namespace kmfp::scenarios
