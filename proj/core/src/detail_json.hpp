#pragma once

#include <json.hpp>

#include "rif/expr.hpp"
#include "rif/weights.hpp"

namespace rif::detail {

nlohmann::json expr_to_json(const Expr& e);
Expr expr_from_json(const nlohmann::json& j);

nlohmann::json weight_to_json(const WeightDistribution& d);
WeightDistribution weight_from_json(const nlohmann::json& j);

}  // namespace rif::detail
