#pragma once

#include <json.hpp>

#include "compass/embedding/umap.hpp"

namespace compass {

nlohmann::json to_json(const UmapParams& params);
UmapParams params_from_json(const nlohmann::json& j);

nlohmann::json to_json(const UmapModel& model);
// Validates every model invariant; throws Error(validation) naming the first
// one that fails.
UmapModel model_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Point2& p);
Point2 point_from_json(const nlohmann::json& j);

}  // namespace compass
