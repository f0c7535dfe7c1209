#pragma once

#include <json.hpp>

#include "riskfront/distribution.hpp"
#include "riskfront/dolfin.hpp"
#include "riskfront/mdp.hpp"

namespace riskfront {

using Json = nlohmann::json;

/// [[support, prob], ...]
Json distribution_to_json(const ReturnDistribution& d);
ReturnDistribution distribution_from_json(const Json& j);

/// Layers are written without the time index when stationary.
Json mdp_to_json(const TabularMDP& mdp);
/// Throws std::invalid_argument on schema errors; model invariants are left to validate().
TabularMDP mdp_from_json(const Json& j);

Json front_to_json(const OptimalityFront& front);
OptimalityFront front_from_json(const Json& j);

}  // namespace riskfront
