#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "panelprobit/error.hpp"
#include "panelprobit/panel.hpp"
#include "panelprobit/tau_distribution.hpp"

namespace panelprobit {

enum class CovariateLaw { None, DifferencedNormal };
enum class EstimatorKind { Ratio, GlmStatic, GlmDynamic, Heckman, RunsT3 };

std::string_view to_string(CovariateLaw law) noexcept;
std::string_view to_string(EstimatorKind kind) noexcept;
/// Throws Error(ConfigError) for unknown names.
CovariateLaw parse_covariate_law(std::string_view name);
EstimatorKind parse_estimator(std::string_view name);

struct SimulationScenario {
  std::string name;  // label only
  std::size_t n = 1000;
  std::size_t horizon = 2;
  double gamma_true = 0.0;
  std::vector<double> beta_true;  // one entry per covariate; empty with CovariateLaw::None
  TauDistribution tau = TauDistribution::normal(0.0, 1.0);
  CovariateLaw covariate_law = CovariateLaw::None;
  std::size_t replications = 100;
  std::uint64_t seed = 1;
  std::vector<EstimatorKind> estimators{EstimatorKind::Ratio};
  /// When set to a, the effects are rescaled to standard deviation a * sqrt(n).
  std::optional<double> sigma_scaling;
  int quadrature_nodes = 64;
  bool heckman_estimate_mean = false;

  /// Throws Error(ConfigError) naming the first violated requirement.
  void validate() const;
  std::size_t covariate_dim() const noexcept { return beta_true.size(); }
  /// Effect distribution after sigma_scaling.
  TauDistribution effective_tau() const;
};

/// Panel for one replication. The stream depends only on (seed, replication_index).
///   x_i1 ~ N(0, I), x_it = x_i,t-1 + N(0, I) under DifferencedNormal
///   d_it = 1{tau_i + gamma d_i,t-1 + x_it' beta + eps_it > 0},  d_i0 = 0
PanelData simulate_panel(const SimulationScenario& scenario, std::uint64_t replication_index);

struct ParameterEstimate {
  std::string name;
  double truth = 0.0;
  double estimate = 0.0;
  std::optional<double> se;
};

struct EstimatorOutcome {
  EstimatorKind estimator = EstimatorKind::Ratio;
  std::vector<ParameterEstimate> parameters;  // empty on failure
  std::optional<ErrorKind> failure;
  std::string failure_message;
};

/// Simulates one panel and applies every selected estimator to it.
std::vector<EstimatorOutcome> run_replication(const SimulationScenario& scenario,
                                              std::uint64_t replication_index);

struct ParameterSummary {
  std::string name;
  double truth = 0.0;
  double rmse = 0.0;
  double bias = 0.0;
  double rmse_mc_se = 0.0;
  std::optional<double> coverage95;  // share of plug-in 95% intervals covering the truth
  double mean_se = 0.0;              // over replications reporting a se
};

struct EstimatorSummary {
  EstimatorKind estimator = EstimatorKind::Ratio;
  std::size_t successes = 0;
  std::size_t failures = 0;
  std::map<std::string, std::size_t> failures_by_kind;
  std::vector<ParameterSummary> parameters;
};

struct RmseReport {
  SimulationScenario scenario;
  std::vector<EstimatorSummary> estimators;
};

/// threads == 0 uses the hardware concurrency. The report does not depend on
/// the thread count. Throws Error(AllReplicationsFailed) if some estimator never succeeds.
RmseReport run_rmse_experiment(const SimulationScenario& scenario, unsigned threads = 0);

}  // namespace panelprobit
