#pragma once

#include <memory>

#include <nlohmann/json.hpp>

#include "kmfp/maps.hpp"
#include "kmfp/oracles.hpp"
#include "kmfp/product_afpp.hpp"
#include "kmfp/spaces.hpp"

// Config-defined objects. Every builder raises ConfigError on unknown kinds,
// missing fields or parameters that break nonexpansiveness.
//
// Self-maps of a space:
//   identity | constant{point} | translate{shift}
//   affine{matrix, offset} (or a, c in one dimension)
//   clamped_translate{shift, lo, hi}   x ↦ min(max(x + shift, lo), hi)
// Product maps T(x,u) on one-dimensional C and M unless noted:
//   diagonal_average                   ((x+u)/2, x)
//   constant{x, u}
//   coordinatewise{first, second}      (f(x), g(u)), any dimensions
//   affine_mix{a,b,c,d,e,f[,lo,hi]}    (clamp(ax+bu+c), dx+eu+f)
// Selections δ: M → C:  identity | constant{point} | affine{a, c}
// Oracles:  grid{cells, levels} | affine | km{max_steps, start}
// Product spaces:
//   {"kind":"product","C":…,"M":…}
//   {"kind":"family","ambient":…,"M":…,"fibers":{"kind":"interval_family",
//     "lo","lo_slope","hi","hi_slope"} | {"kind":"constant","space":…}}

namespace kmfp {

/// A number, or one of the strings "inf", "-inf", "p/q", "1e-3".
double real_from_json(const nlohmann::json& v);
/// Exact: "p/q" and decimal strings, integers; other numbers through their
/// shortest decimal form.
Rational rational_from_json(const nlohmann::json& v);
/// A number (one-dimensional point) or an array of numbers.
Point point_from_json(const nlohmann::json& v);

NonexpansiveMap map_from_json(const nlohmann::json& j, const SpacePtr& domain);
ProductMap product_map_from_json(const nlohmann::json& j, const ProductPtr& h);
SelectionFunction selection_from_json(const nlohmann::json& j, const SpacePtr& m,
                                      const SpacePtr& target);
OraclePtr oracle_from_json(const nlohmann::json& j, const SpacePtr& m);

/// Families are checked against δ (δ(u) ∈ C_u on sampled u), which is why
/// the selection descriptor is needed here.
ProductPtr product_space_from_json(const nlohmann::json& j, const nlohmann::json& selection,
                                   std::uint64_t seed);

/// Probe kinds for main_lemma_run: selection (x* = δ(u)), parameter
/// (x* = u), constant{point}, km{steps} (KM orbit of T_u from δ(u)).
Probe probe_from_json(const nlohmann::json& j, const ProductProblem& problem);

}  // namespace kmfp
