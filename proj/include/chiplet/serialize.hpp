#pragma once

#include <string>

#include "json.hpp"

#include "chiplet/arrangement.hpp"
#include "chiplet/geometry.hpp"
#include "chiplet/linkmodel.hpp"
#include "chiplet/metrics.hpp"
#include "chiplet/simnet.hpp"

namespace chiplet {

using nlohmann::json;

void to_json(json& j, const ChipletPlacement& p);
void to_json(json& j, const Arrangement& arr);
void to_json(json& j, const MetricsReport& m);
void to_json(json& j, const ShapeSolution& s);
void to_json(json& j, const LinkParams& p);
void to_json(json& j, const LinkBudget& b);
void to_json(json& j, const SimConfig& c);
void to_json(json& j, const SimResult& r);
void to_json(json& j, const SaturationResult& s);

void from_json(const json& j, LinkParams& p);
void from_json(const json& j, SimConfig& c);

/// Rebuilds an arrangement from its JSON form. The stored edge list must
/// match the adjacency derived from the placements.
Arrangement arrangement_from_json(const json& j);

}  // namespace chiplet
