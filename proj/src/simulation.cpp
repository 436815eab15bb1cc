#include "panelprobit/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <random>
#include <thread>

#include "panelprobit/conditional_glm.hpp"
#include "panelprobit/heckman_mle.hpp"
#include "panelprobit/ratio_estimator.hpp"
#include "panelprobit/runs_t3.hpp"

namespace panelprobit {
namespace {

constexpr std::uint32_t kStreamTag = 0x70616e6cu;

std::mt19937_64 replication_stream(std::uint64_t seed, std::uint64_t replication) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(replication), static_cast<std::uint32_t>(replication >> 32),
                    kStreamTag};
  return std::mt19937_64(seq);
}

void config_error(const std::string& message) { throw Error(ErrorKind::ConfigError, message); }

std::vector<ParameterEstimate> beta_estimates(const SimulationScenario& s, const GlmFit& fit,
                                              Eigen::Index offset) {
  std::vector<ParameterEstimate> out;
  for (std::size_t j = 0; j < s.covariate_dim(); ++j) {
    const Eigen::Index c = offset + static_cast<Eigen::Index>(j);
    out.push_back({fit.names[c], s.beta_true[j], fit.coefficients(c), fit.se(c)});
  }
  return out;
}

std::vector<ParameterEstimate> apply(EstimatorKind kind, const SimulationScenario& s, const PanelData& panel,
                                     const TauDistribution& tau) {
  switch (kind) {
    case EstimatorKind::Ratio: {
      const RatioEstimate r = estimate_gamma_ratio(count_transitions(panel));
      return {{"gamma", s.gamma_true, r.gamma_hat, r.se}};
    }
    case EstimatorKind::GlmStatic:
      return beta_estimates(s, fit_conditional(build_switcher_design(panel, false)), 0);
    case EstimatorKind::GlmDynamic: {
      const GlmFit fit = fit_conditional(build_switcher_design(panel, true));
      std::vector<ParameterEstimate> out{{"gamma", s.gamma_true, fit.coefficients(0), fit.se(0)}};
      const auto betas = beta_estimates(s, fit, 1);
      out.insert(out.end(), betas.begin(), betas.end());
      return out;
    }
    case EstimatorKind::Heckman: {
      MleSpec spec;
      spec.horizon = s.horizon;
      spec.estimate_mean = s.heckman_estimate_mean;
      spec.quadrature_nodes = s.quadrature_nodes;
      const MleFit fit = fit_mle(panel, spec);
      std::vector<ParameterEstimate> out{{"gamma", s.gamma_true, fit.gamma_hat, fit.gamma_se},
                                         {"sigma", tau.sd(), fit.sigma_hat, fit.sigma_se}};
      if (fit.mu_hat) out.push_back({"mu", tau.mean(), *fit.mu_hat, fit.mu_se});
      for (std::size_t j = 0; j < fit.beta_hat.size(); ++j)
        out.push_back({"beta" + std::to_string(j + 1), s.beta_true[j], fit.beta_hat[j], fit.beta_se[j]});
      return out;
    }
    case EstimatorKind::RunsT3: {
      const T3Estimate e = estimate_gamma_t3(tabulate_runs(panel));
      return {{"gamma", s.gamma_true, e.gamma_hat, e.se}};
    }
  }
  return {};
}

}  // namespace

std::string_view to_string(CovariateLaw law) noexcept {
  return law == CovariateLaw::None ? "none" : "differenced_normal";
}

std::string_view to_string(EstimatorKind kind) noexcept {
  switch (kind) {
    case EstimatorKind::Ratio: return "ratio";
    case EstimatorKind::GlmStatic: return "glm_static";
    case EstimatorKind::GlmDynamic: return "glm_dynamic";
    case EstimatorKind::Heckman: return "heckman";
    case EstimatorKind::RunsT3: return "runs_t3";
  }
  return "unknown";
}

CovariateLaw parse_covariate_law(std::string_view name) {
  if (name == "none") return CovariateLaw::None;
  if (name == "differenced_normal") return CovariateLaw::DifferencedNormal;
  throw Error(ErrorKind::ConfigError, "unknown covariate_law '" + std::string(name) + "'");
}

EstimatorKind parse_estimator(std::string_view name) {
  for (auto k : {EstimatorKind::Ratio, EstimatorKind::GlmStatic, EstimatorKind::GlmDynamic,
                 EstimatorKind::Heckman, EstimatorKind::RunsT3})
    if (to_string(k) == name) return k;
  throw Error(ErrorKind::ConfigError, "unknown estimator '" + std::string(name) + "'");
}

void SimulationScenario::validate() const {
  if (n < 2) config_error("n must be at least 2");
  if (horizon != 2 && horizon != 3) config_error("horizon must be 2 or 3");
  if (replications < 1) config_error("replications must be at least 1");
  if (!std::isfinite(gamma_true)) config_error("gamma_true must be finite");
  for (double b : beta_true)
    if (!std::isfinite(b)) config_error("beta_true entries must be finite");
  if (covariate_law == CovariateLaw::None && !beta_true.empty())
    config_error("beta_true must be empty when covariate_law is none");
  if (covariate_law == CovariateLaw::DifferencedNormal && beta_true.empty())
    config_error("differenced_normal covariates need a non-empty beta_true");
  if (sigma_scaling && !(*sigma_scaling > 0.0 && std::isfinite(*sigma_scaling)))
    config_error("sigma_scaling must be positive");
  if (quadrature_nodes < 1 || quadrature_nodes > 512) config_error("quadrature_nodes must lie in [1, 512]");
  if (estimators.empty()) config_error("at least one estimator is required");
  for (std::size_t a = 0; a < estimators.size(); ++a)
    for (std::size_t b = a + 1; b < estimators.size(); ++b)
      if (estimators[a] == estimators[b])
        config_error("estimator '" + std::string(to_string(estimators[a])) + "' listed twice");
  for (EstimatorKind e : estimators) {
    const std::string name(to_string(e));
    switch (e) {
      case EstimatorKind::Ratio:
        if (horizon != 2 || !beta_true.empty()) config_error(name + " needs T = 2 without covariates");
        break;
      case EstimatorKind::GlmStatic:
        if (horizon != 2 || beta_true.empty()) config_error(name + " needs T = 2 with covariates");
        break;
      case EstimatorKind::GlmDynamic:
        if (horizon != 2) config_error(name + " needs T = 2");
        break;
      case EstimatorKind::Heckman:
        break;
      case EstimatorKind::RunsT3:
        if (horizon != 3 || !beta_true.empty()) config_error(name + " needs T = 3 without covariates");
        break;
    }
  }
}

TauDistribution SimulationScenario::effective_tau() const {
  if (!sigma_scaling) return tau;
  return tau.rescaled(*sigma_scaling * std::sqrt(static_cast<double>(n)));
}

PanelData simulate_panel(const SimulationScenario& s, std::uint64_t replication_index) {
  std::mt19937_64 rng = replication_stream(s.seed, replication_index);
  std::normal_distribution<double> normal(0.0, 1.0);
  const TauDistribution tau = s.effective_tau();
  const std::size_t k = s.covariate_dim();
  const std::size_t T = s.horizon;

  std::vector<std::uint8_t> outcomes(s.n * T);
  std::vector<double> covariates(s.n * T * k);
  std::vector<double> x(k);
  for (std::size_t i = 0; i < s.n; ++i) {
    const double tau_i = tau.sample(rng);
    int previous = 0;
    for (std::size_t t = 0; t < T; ++t) {
      double index = tau_i + s.gamma_true * previous;
      for (std::size_t j = 0; j < k; ++j) {
        x[j] = (t == 0 ? 0.0 : x[j]) + normal(rng);
        covariates[(i * T + t) * k + j] = x[j];
        index += x[j] * s.beta_true[j];
      }
      const int d = index + normal(rng) > 0.0 ? 1 : 0;
      outcomes[i * T + t] = static_cast<std::uint8_t>(d);
      previous = d;
    }
  }
  return PanelData(T, std::move(outcomes), k, std::move(covariates));
}

std::vector<EstimatorOutcome> run_replication(const SimulationScenario& s, std::uint64_t replication_index) {
  const PanelData panel = simulate_panel(s, replication_index);
  const TauDistribution tau = s.effective_tau();
  std::vector<EstimatorOutcome> out;
  for (EstimatorKind kind : s.estimators) {
    EstimatorOutcome o;
    o.estimator = kind;
    try {
      o.parameters = apply(kind, s, panel, tau);
    } catch (const Error& e) {
      o.failure = e.kind();
      o.failure_message = e.what();
    }
    out.push_back(std::move(o));
  }
  return out;
}

RmseReport run_rmse_experiment(const SimulationScenario& s, unsigned threads) {
  s.validate();
  const std::size_t R = s.replications;
  std::vector<std::vector<EstimatorOutcome>> results(R);

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, R));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> thrown(threads);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t r; (r = next.fetch_add(1)) < R;) results[r] = run_replication(s, r);
        } catch (...) {
          thrown[w] = std::current_exception();
          next = R;
        }
      });
    }
  }
  for (const auto& ex : thrown)
    if (ex) std::rethrow_exception(ex);

  RmseReport report;
  report.scenario = s;
  for (std::size_t e = 0; e < s.estimators.size(); ++e) {
    EstimatorSummary summary;
    summary.estimator = s.estimators[e];
    std::vector<const EstimatorOutcome*> ok;
    for (std::size_t r = 0; r < R; ++r) {
      const EstimatorOutcome& o = results[r][e];
      if (o.failure) {
        ++summary.failures;
        ++summary.failures_by_kind[std::string(to_string(*o.failure))];
      } else {
        ok.push_back(&o);
      }
    }
    summary.successes = ok.size();
    if (ok.empty()) {
      throw Error(ErrorKind::AllReplicationsFailed,
                  "every replication failed for estimator " + std::string(to_string(summary.estimator)),
                  {{"estimator", to_string(summary.estimator)}, {"replications", R}});
    }
    const std::size_t params = ok.front()->parameters.size();
    for (std::size_t p = 0; p < params; ++p) {
      ParameterSummary ps;
      ps.name = ok.front()->parameters[p].name;
      ps.truth = ok.front()->parameters[p].truth;
      const double m = static_cast<double>(ok.size());
      double sum_err = 0.0, sum_sq = 0.0, sum_quad = 0.0, sum_se = 0.0;
      std::size_t with_se = 0, covered = 0;
      for (const EstimatorOutcome* o : ok) {
        const ParameterEstimate& pe = o->parameters[p];
        const double err = pe.estimate - pe.truth;
        sum_err += err;
        sum_sq += err * err;
        sum_quad += err * err * err * err;
        if (pe.se && std::isfinite(*pe.se)) {
          ++with_se;
          sum_se += *pe.se;
          if (std::abs(err) <= 1.959963984540054 * *pe.se) ++covered;
        }
      }
      ps.bias = sum_err / m;
      const double mse = sum_sq / m;
      ps.rmse = std::sqrt(mse);
      if (ok.size() > 1 && ps.rmse > 0.0) {
        const double var_sq = std::max(0.0, (sum_quad - m * mse * mse) / (m - 1.0));
        ps.rmse_mc_se = std::sqrt(var_sq) / std::sqrt(m) / (2.0 * ps.rmse);
      }
      if (with_se > 0) {
        ps.coverage95 = static_cast<double>(covered) / static_cast<double>(with_se);
        ps.mean_se = sum_se / static_cast<double>(with_se);
      }
      summary.parameters.push_back(std::move(ps));
    }
    report.estimators.push_back(std::move(summary));
  }
  return report;
}

}  // namespace panelprobit
