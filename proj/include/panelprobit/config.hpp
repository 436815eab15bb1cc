#pragma once

#include <string>

#include "json.hpp"
#include "panelprobit/simulation.hpp"

namespace panelprobit {

/// Scenario document, field for field:
///   {"n", "horizon", "gamma_true", "beta_true", "tau", "covariate_law", "replications",
///    "seed", "estimators", "sigma_scaling", "quadrature_nodes", "heckman_estimate_mean", "name"}
/// with tau one of
///   {"family": "normal", "mean", "variance"}
///   {"family": "uniform", "lower", "upper"}
///   {"family": "mixture_normal", "weight", "mean1", "variance1", "mean2", "variance2"}
/// n, horizon, gamma_true, tau, replications and estimators are required. Unknown keys
/// are rejected. Throws Error(ConfigError).
SimulationScenario parse_scenario(const nlohmann::ordered_json& doc);

/// Complete effective scenario, accepted back by parse_scenario.
nlohmann::ordered_json scenario_to_json(const SimulationScenario& scenario);
nlohmann::ordered_json tau_to_json(const TauDistribution& tau);

}  // namespace panelprobit
