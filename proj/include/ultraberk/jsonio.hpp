#pragma once

#include <json.hpp>

#include "ultraberk/approx.hpp"
#include "ultraberk/semialg.hpp"

namespace ultraberk {

using Json = nlohmann::json;

/// Tower description document: base field plus an ordered step list; every
/// step is re-certified on load and a kind mismatch fails loudly.
TowerPtr tower_from_json(const Json& doc);
Json tower_to_json(const TowerPtr& tw);

/// Point description document: ordered layers with polynomial-text centers
/// (or {defining, approx} pairs) and magnitude-text radii.
Point point_from_json(const Json& doc, const TowerPtr& tw);
Json point_to_json(const Point& x);

Json approx1d_to_json(const Approx1D& a, const Point& x);
Json sdk_to_json(const SdkSet& s);

Json magnitude_to_json(const Magnitude& m);

} // namespace ultraberk
