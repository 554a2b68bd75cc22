#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ultraberk/jsonio.hpp"

namespace ultraberk {

struct CheckResult {
    std::string name;
    bool ok = false;
    std::string detail;
};

/// Deterministic catalogs used by the self test, the unit tests and the
/// acceptance suite.
namespace gen {

/// Towers of depth <= 2 with step degrees <= 4 over Q_p.
std::vector<TowerPtr> tower_catalog(long p);

/// An unramified step polynomial of the given degree over the tower
/// (smallest lift that certifies), in the generator name provided.
UPoly<TowerElem> unramified_poly(const TowerPtr& tw, long deg);

Point rational_point(const TowerPtr& tw, const Rat& a);
Point disc_point(const TowerPtr& tw, const TowerElem& center, const Magnitude& radius);
Point gauss_point(const TowerPtr& tw);
/// dim-1 Hensel center: root of C^2 - (1 + p) near 1 (p odd), given radius.
Point sqrt_unit_point(const TowerPtr& tw, const Magnitude& radius);

/// dim-1 Hensel center with a root that is genuinely quadratic over the base:
/// C^2 - c for a non-square unit c, approximated over an unramified quadratic
/// tower. Suitable for rigid (radius-zero) directions.
Point rigid_quadratic_point(long p, long shift, const Magnitude& radius);

/// The archetype list used by the evaluator invariants: rational,
/// Eisenstein-center disc, Gauss, eps-radius, Hensel tower.
std::vector<std::pair<std::string, Point>> archetypes(long p);

/// The dim-1 suite: 10 rational, 20 tower-center discs, 10 Gauss/eps-radius,
/// 10 Hensel points; deterministic in the seed.
std::vector<Point> dim1_suite(long p, std::uint64_t seed);

/// dim-2 point with layer 1 = (0, r) and layer 2 the square root of 1 + T1
/// near 1 with radius s.
Point sqrt_series_point(const TowerPtr& tw, const Magnitude& r, const Magnitude& s);

/// dim-3 point over the Gauss point with T2 = T1^4, T3 = T1^6.
Point curve_graph_point(const TowerPtr& tw);

TPoly random_poly(const TowerPtr& tw, int nvars, long maxdeg, Rng& rng);

} // namespace gen

/// Module invariant suites; `scale` in (0, 1] shrinks the sample counts.
std::vector<CheckResult> run_selftest(std::uint64_t seed, double scale = 1.0);

} // namespace ultraberk
