#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "panelprobit/panel.hpp"

namespace panelprobit {

/// Two-wave switchers (d1 + d2 = 1) with covariate differences x_i2 - x_i1.
/// In the dynamic model the parameter vector is (gamma, beta), otherwise beta.
struct SwitcherDesign {
  Eigen::MatrixXd delta_x;               // m x k
  Eigen::VectorXd z;                     // z_i = 1 when (d1, d2) = (1, 0)
  bool include_intercept = false;        // dynamic model
  std::vector<std::size_t> individuals;  // panel row of each switcher

  Eigen::Index rows() const noexcept { return delta_x.rows(); }
  Eigen::Index covariate_dim() const noexcept { return delta_x.cols(); }
  Eigen::Index parameter_count() const noexcept { return delta_x.cols() + (include_intercept ? 1 : 0); }
  std::vector<std::string> parameter_names() const;
};

/// Throws Error(WrongHorizon) for T != 2 and Error(NoSwitchers) when m = 0.
SwitcherDesign build_switcher_design(const PanelData& panel, bool dynamic);

/// Conditional probability of (1, 0) given one switch:
///   G(gamma + index) / (G(gamma + index) + G(-index)),  index = (x2 - x1)' beta.
/// gamma enters only the first argument, so this is not an intercept in the link.
double conditional_prob(double gamma, double index) noexcept;

/// Static model: K(index).
double conditional_prob(double index) noexcept;

struct LinkPartials {
  double p = 0.5;
  double dp_dgamma = 0.0;
  double dp_dindex = 0.0;
};

LinkPartials conditional_prob_partials(double gamma, double index) noexcept;

struct IrlsOptions {
  int max_iterations = 100;
  double deviance_tolerance = 1e-10;
  double probability_floor = 1e-10;
  double divergence_bound = 1e3;
};

struct GlmFit {
  Eigen::VectorXd coefficients;
  std::vector<std::string> names;
  Eigen::MatrixXd covariance;
  std::string covariance_source;  // "observed" or "expected"
  double deviance = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> deviance_trace;  // deviance after each accepted step, starting at zero parameters

  bool has_gamma() const noexcept { return !names.empty() && names.front() == "gamma"; }
  double se(Eigen::Index j) const { return std::sqrt(covariance(j, j)); }
};

double conditional_loglik(const SwitcherDesign& design, const Eigen::VectorXd& theta,
                          double probability_floor = 1e-10);
Eigen::VectorXd conditional_score(const SwitcherDesign& design, const Eigen::VectorXd& theta,
                                  double probability_floor = 1e-10);

/// IRLS (Fisher scoring) with step halving, started at zero.
/// Throws Error(RankDeficient) if the weighted design loses rank and
/// Error(Diverged) when coefficients run off to infinity.
GlmFit fit_conditional(const SwitcherDesign& design, const IrlsOptions& options = {});

enum class Verdict { Pass, Warn, Fail };

std::string_view to_string(Verdict verdict) noexcept;

struct IdentifiabilityReport {
  Verdict verdict = Verdict::Pass;
  std::string reason;
  Eigen::Index rank = 0;                  // rank of the covariate differences
  bool augmented_full_rank = false;       // rank of (1, delta_x) equals k + 1
};

IdentifiabilityReport identifiability_check(const SwitcherDesign& design);

}  // namespace panelprobit
