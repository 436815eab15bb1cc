#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "panelprobit/panel.hpp"

namespace panelprobit {

/// Random-effects dynamic probit: tau ~ N(mu, sigma^2),
///   d_it = 1{tau + gamma d_{i,t-1} + x_it' beta + eps_it > 0},  d_i0 = 0.
struct HeckmanParams {
  double gamma = 0.0;
  double sigma = 1.0;
  double mu = 0.0;
  std::vector<double> beta;
};

struct MleSpec {
  std::size_t horizon = 2;
  bool estimate_mean = false;  // false fixes mu = 0
  int quadrature_nodes = 64;
  double tolerance = 1e-8;     // simplex size at convergence
  int restarts = 3;            // re-runs from the incumbent optimum
};

/// Individuals with identical outcome sequences and covariates are pooled,
/// so pattern data (no covariates) cost at most 2^T integrals per evaluation.
/// Each integral is computed on the log scale by Gauss-Hermite quadrature
/// centred at the mode of the integrand and scaled by its curvature there.
class HeckmanLikelihood {
 public:
  HeckmanLikelihood(const PanelData& panel, int quadrature_nodes);

  /// Log-likelihood, with the offending individual when a sequence
  /// log-probability is not finite.
  struct Evaluation {
    double loglik = 0.0;
    std::optional<std::size_t> underflow_individual;
  };
  Evaluation evaluate(const HeckmanParams& params) const;

  std::size_t horizon() const noexcept { return horizon_; }
  std::size_t covariate_dim() const noexcept { return k_; }
  std::size_t distinct_rows() const noexcept { return rows_.size(); }

 private:
  struct Row {
    std::vector<std::uint8_t> outcomes;
    std::vector<double> covariates;  // T * k
    double count = 0.0;
    std::size_t first_individual = 0;
  };
  std::size_t horizon_ = 0;
  std::size_t k_ = 0;
  int nodes_ = 64;
  std::vector<Row> rows_;
};

/// Sum over individuals of log P(d_i1..d_iT). Throws Error(NonFiniteLikelihood)
/// naming the first individual whose log-probability is not finite.
double cell_loglik(const HeckmanParams& params, const PanelData& panel, int quadrature_nodes = 64);

struct MleFit {
  double gamma_hat = 0.0;
  double sigma_hat = 0.0;
  std::optional<double> mu_hat;
  std::vector<double> beta_hat;
  double gamma_se = 0.0;
  double sigma_se = 0.0;
  std::optional<double> mu_se;
  std::vector<double> beta_se;
  double loglik = 0.0;
  bool converged = false;
  int evaluations = 0;
  Eigen::MatrixXd covariance;  // in the optimized coordinates (gamma, log sigma, [mu], beta)

  HeckmanParams params() const;
};

/// Maximizes cell_loglik over (gamma, log sigma [, mu] [, beta]) by Nelder-Mead
/// from three seeds with restarts; standard errors from a central-difference
/// Hessian. Throws Error(WrongHorizon), Error(NotConverged), Error(BoundarySigma).
MleFit fit_mle(const PanelData& panel, const MleSpec& spec);

}  // namespace panelprobit
