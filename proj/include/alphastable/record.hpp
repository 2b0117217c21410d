#pragma once

#include <json.hpp>

#include "alphastable/em.hpp"
#include "alphastable/params.hpp"

namespace alphastable::record {

using Json = nlohmann::ordered_json;

/// Fixed key order: K, N, N0, M, M0, beta_grid, beta_final_grid, profile_K,
/// alpha_min, cdf_sample_size, seed.
Json to_json(const em::EMConfig& cfg);

/// Keys absent from `j` keep their value from `base`; unknown keys throw.
em::EMConfig config_from_json(const nlohmann::json& j, em::EMConfig base = {});

/// {"parameterization", "alpha", "beta", "sigma", "mu"}.
Json to_json(const StableParams& p);

}  // namespace alphastable::record
