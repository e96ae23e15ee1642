#pragma once

// Internal JSON helpers shared by the config parser and report writers.

#include <json.hpp>
#include <optional>
#include <string>

#include "sevrel/distributions.hpp"
#include "sevrel/limit_state.hpp"

namespace sevrel::detail {

using Json = nlohmann::ordered_json;

Json distribution_json(const DistributionSpec& spec);
DistributionSpec distribution_from(const Json& node, const std::string& pointer);

Json model_json(const LimitStateModel& model);
Json simulation_json(const SimulationConfig& config);

// Finite doubles as numbers, everything else as null.
inline Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }
inline Json number_or_null(const std::optional<double>& v) { return v ? number_or_null(*v) : Json(nullptr); }

}  // namespace sevrel::detail
