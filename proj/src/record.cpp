#include "alphastable/record.hpp"

#include <string>

namespace alphastable::record {

Json to_json(const em::EMConfig& cfg) {
  Json j;
  j["K"] = cfg.K;
  j["N"] = cfg.N;
  j["N0"] = cfg.N0;
  j["M"] = cfg.M;
  j["M0"] = cfg.M0;
  j["beta_grid"] = cfg.beta_grid;
  j["beta_final_grid"] = cfg.beta_final_grid;
  j["profile_K"] = cfg.profile_K;
  j["alpha_min"] = cfg.alpha_min;
  j["cdf_sample_size"] = cfg.cdf_sample_size;
  j["seed"] = cfg.seed;
  return j;
}

em::EMConfig config_from_json(const nlohmann::json& j, em::EMConfig base) {
  if (!j.is_object()) throw InvalidArgument("EM configuration must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "K") base.K = value.get<std::size_t>();
    else if (key == "N") base.N = value.get<std::size_t>();
    else if (key == "N0") base.N0 = value.get<std::size_t>();
    else if (key == "M") base.M = value.get<std::size_t>();
    else if (key == "M0") base.M0 = value.get<std::size_t>();
    else if (key == "beta_grid") base.beta_grid = value.get<std::size_t>();
    else if (key == "beta_final_grid") base.beta_final_grid = value.get<std::size_t>();
    else if (key == "profile_K") base.profile_K = value.get<std::size_t>();
    else if (key == "alpha_min") base.alpha_min = value.get<double>();
    else if (key == "cdf_sample_size") base.cdf_sample_size = value.get<std::size_t>();
    else if (key == "seed") base.seed = value.get<std::uint64_t>();
    else throw InvalidArgument("unknown EM configuration key '" + key + "'");
  }
  base.validate();
  return base;
}

Json to_json(const StableParams& p) {
  Json j;
  j["parameterization"] = to_string(p.parameterization);
  j["alpha"] = p.alpha;
  j["beta"] = p.beta;
  j["sigma"] = p.sigma;
  j["mu"] = p.mu;
  return j;
}

}  // namespace alphastable::record
