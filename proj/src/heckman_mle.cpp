#include "panelprobit/heckman_mle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <tuple>

#include "panelprobit/error.hpp"
#include "panelprobit/normal.hpp"
#include "panelprobit/optimize.hpp"
#include "panelprobit/quadrature.hpp"

namespace panelprobit {
namespace {

constexpr double kSigmaFloor = 1e-6;

struct Layout {
  bool has_mu = false;
  std::size_t k = 0;

  Eigen::Index size() const { return static_cast<Eigen::Index>(2 + (has_mu ? 1 : 0) + k); }
  Eigen::Index beta_offset() const { return has_mu ? 3 : 2; }

  HeckmanParams unpack(const Eigen::VectorXd& theta) const {
    HeckmanParams p;
    p.gamma = theta(0);
    p.sigma = std::exp(theta(1));
    p.mu = has_mu ? theta(2) : 0.0;
    p.beta.resize(k);
    for (std::size_t j = 0; j < k; ++j) p.beta[j] = theta(beta_offset() + static_cast<Eigen::Index>(j));
    return p;
  }
};

}  // namespace

HeckmanLikelihood::HeckmanLikelihood(const PanelData& panel, int quadrature_nodes)
    : horizon_(panel.horizon()), k_(panel.covariate_dim()), nodes_(quadrature_nodes) {
  gauss_hermite_rule(nodes_);  // validates the order
  std::map<std::pair<std::vector<std::uint8_t>, std::vector<double>>, std::size_t> index;
  for (std::size_t i = 0; i < panel.size(); ++i) {
    const auto out = panel.outcomes(i);
    std::vector<std::uint8_t> seq(out.begin(), out.end());
    std::vector<double> cov;
    cov.reserve(horizon_ * k_);
    for (std::size_t t = 0; t < horizon_; ++t) {
      const auto x = panel.covariates(i, t);
      cov.insert(cov.end(), x.begin(), x.end());
    }
    auto key = std::make_pair(std::move(seq), std::move(cov));
    auto it = index.find(key);
    if (it == index.end()) {
      index.emplace(key, rows_.size());
      rows_.push_back(Row{key.first, key.second, 1.0, i});
    } else {
      rows_[it->second].count += 1.0;
    }
  }
}

HeckmanLikelihood::Evaluation HeckmanLikelihood::evaluate(const HeckmanParams& params) const {
  const QuadratureRule& rule = gauss_hermite_rule(nodes_);
  const double mu = params.mu;
  const double sigma = params.sigma;
  const double inv_var = 1.0 / (sigma * sigma);
  Evaluation result;
  std::vector<double> shift(horizon_);
  std::vector<double> sign(horizon_);

  // f(tau) = sum_t log Phi(s_t (tau + shift_t)) - (tau - mu)^2 / (2 sigma^2)
  const auto f = [&](double tau) {
    double v = -0.5 * (tau - mu) * (tau - mu) * inv_var;
    for (std::size_t t = 0; t < horizon_; ++t) v += log_std_normal_cdf(sign[t] * (tau + shift[t]));
    return v;
  };
  const auto slope_and_curvature = [&](double tau) {
    double d1 = -(tau - mu) * inv_var;
    double d2 = -inv_var;
    for (std::size_t t = 0; t < horizon_; ++t) {
      const double x = sign[t] * (tau + shift[t]);
      const double lambda = inverse_mills_ratio(x);
      d1 += sign[t] * lambda;
      d2 -= lambda * (x + lambda);
    }
    return std::pair{d1, d2};
  };

  for (const Row& row : rows_) {
    bool finite = true;
    int previous = 0;
    for (std::size_t t = 0; t < horizon_; ++t) {
      double s = params.gamma * previous;
      for (std::size_t j = 0; j < k_; ++j) s += row.covariates[t * k_ + j] * params.beta[j];
      shift[t] = s;
      sign[t] = row.outcomes[t] ? 1.0 : -1.0;
      previous = row.outcomes[t];
      finite = finite && std::isfinite(s);
    }
    if (!finite) {
      result.underflow_individual = row.first_individual;
      result.loglik = -std::numeric_limits<double>::infinity();
      return result;
    }

    // f is strictly concave, so its mode is the root of a decreasing slope.
    // Bracket it, then Newton with bisection fallback.
    double lo = mu, hi = mu;
    double step = sigma;
    if (slope_and_curvature(mu).first > 0.0) {
      while (slope_and_curvature(hi).first > 0.0) { lo = hi; hi += step; step *= 2.0; }
    } else {
      while (slope_and_curvature(lo).first < 0.0) { hi = lo; lo -= step; step *= 2.0; }
    }
    double mode = 0.5 * (lo + hi);
    double curvature = -inv_var;
    for (int it = 0; it < 100; ++it) {
      const auto [d1, d2] = slope_and_curvature(mode);
      curvature = d2;
      if (d1 > 0.0) lo = mode; else hi = mode;
      double next = mode - d1 / d2;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      const bool done = std::abs(next - mode) <= 1e-13 * (1.0 + std::abs(mode));
      mode = next;
      if (done) break;
    }
    curvature = slope_and_curvature(mode).second;

    // Gauss-Hermite around the mode: tau = mode + scale * z.
    const double scale = 1.0 / std::sqrt(-curvature);
    const double f_mode = f(mode);
    double sum = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const double z = rule.nodes[q];
      sum += rule.weights[q] * std::exp(f(mode + scale * z) - f_mode + 0.5 * z * z);
    }
    const double log_prob = f_mode + std::log(scale / sigma) + std::log(sum);
    if (!std::isfinite(log_prob)) {
      result.underflow_individual = row.first_individual;
      result.loglik = -std::numeric_limits<double>::infinity();
      return result;
    }
    result.loglik += row.count * log_prob;
  }
  return result;
}

double cell_loglik(const HeckmanParams& params, const PanelData& panel, int quadrature_nodes) {
  if (!(params.sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  if (params.beta.size() != panel.covariate_dim()) throw std::invalid_argument("beta has the wrong dimension");
  const HeckmanLikelihood likelihood(panel, quadrature_nodes);
  const auto eval = likelihood.evaluate(params);
  if (eval.underflow_individual) {
    throw Error(ErrorKind::NonFiniteLikelihood,
                "sequence log-probability is not finite for individual " + panel.id(*eval.underflow_individual),
                {{"individual", panel.id(*eval.underflow_individual)}});
  }
  return eval.loglik;
}

HeckmanParams MleFit::params() const {
  HeckmanParams p;
  p.gamma = gamma_hat;
  p.sigma = sigma_hat;
  p.mu = mu_hat.value_or(0.0);
  p.beta = beta_hat;
  return p;
}

MleFit fit_mle(const PanelData& panel, const MleSpec& spec) {
  if (panel.horizon() != spec.horizon) {
    throw Error(ErrorKind::WrongHorizon,
                "panel has T = " + std::to_string(panel.horizon()) + " but the fit expects T = " +
                    std::to_string(spec.horizon),
                {{"panel_horizon", panel.horizon()}, {"spec_horizon", spec.horizon}});
  }
  if (panel.size() == 0) throw Error(ErrorKind::NotConverged, "empty panel");
  {
    const int first = panel.outcome(0, 0);
    bool varies = false;
    for (std::size_t i = 0; i < panel.size() && !varies; ++i)
      for (std::size_t t = 0; t < panel.horizon(); ++t)
        if (panel.outcome(i, t) != first) { varies = true; break; }
    if (!varies) {
      throw Error(ErrorKind::NotConverged,
                  "all outcomes are identical; the likelihood is maximized at degenerate parameters",
                  {{"outcome", first}});
    }
  }

  const Layout layout{spec.estimate_mean, panel.covariate_dim()};
  const HeckmanLikelihood likelihood(panel, spec.quadrature_nodes);
  const auto negloglik = [&](const Eigen::VectorXd& theta) {
    if (!std::isfinite(theta(1)) || theta(1) > 50.0) return std::numeric_limits<double>::infinity();
    return -likelihood.evaluate(layout.unpack(theta)).loglik;
  };

  NelderMeadOptions nm;
  nm.x_tolerance = spec.tolerance;
  nm.f_tolerance = 1e-12;
  nm.max_evaluations = 20000;

  const Eigen::VectorXd origin = Eigen::VectorXd::Zero(layout.size());
  std::vector<Eigen::VectorXd> seeds{origin, origin, origin};
  for (Eigen::Index j = 0; j < layout.size(); ++j) {
    seeds[1](j) = (j % 2 == 0) ? 0.3 : -0.3;
    seeds[2](j) = (j % 2 == 0) ? -0.3 : 0.5;
  }

  NelderMeadResult best;
  best.value = std::numeric_limits<double>::infinity();
  int evaluations = 0;
  bool any_converged = false;
  for (const Eigen::VectorXd& seed : seeds) {
    NelderMeadResult run = nelder_mead_minimize(negloglik, seed, nm);
    evaluations += run.evaluations;
    for (int r = 0; r < spec.restarts; ++r) {
      NelderMeadOptions again = nm;
      again.initial_step = 0.1;
      NelderMeadResult rerun = nelder_mead_minimize(negloglik, run.x, again);
      evaluations += rerun.evaluations;
      const bool improved = rerun.value < run.value - 1e-10 * (1.0 + std::abs(run.value));
      if (rerun.value <= run.value) run = rerun;
      if (!improved) break;
    }
    any_converged = any_converged || run.converged;
    if (run.value < best.value) best = run;
  }
  if (!std::isfinite(best.value) || !any_converged || !best.converged) {
    throw Error(ErrorKind::NotConverged, "simplex search did not converge",
                {{"evaluations", evaluations}});
  }

  const HeckmanParams at = layout.unpack(best.x);
  if (at.sigma < kSigmaFloor) {
    throw Error(ErrorKind::BoundarySigma, "random-effect scale collapsed to zero", {{"sigma_hat", at.sigma}});
  }

  const auto loglik = [&](const Eigen::VectorXd& theta) { return likelihood.evaluate(layout.unpack(theta)).loglik; };
  const Eigen::MatrixXd hessian = numerical_hessian(loglik, best.x, 1e-4);
  const Eigen::MatrixXd information = -hessian;
  Eigen::LLT<Eigen::MatrixXd> llt(information);
  if (llt.info() != Eigen::Success || !information.allFinite()) {
    throw Error(ErrorKind::NotConverged, "information matrix at the optimum is not positive definite",
                {{"gamma", at.gamma}, {"sigma", at.sigma}});
  }

  MleFit fit;
  fit.covariance = llt.solve(Eigen::MatrixXd::Identity(layout.size(), layout.size()));
  fit.gamma_hat = at.gamma;
  fit.sigma_hat = at.sigma;
  fit.gamma_se = std::sqrt(fit.covariance(0, 0));
  fit.sigma_se = at.sigma * std::sqrt(fit.covariance(1, 1));  // delta method from log sigma
  if (layout.has_mu) {
    fit.mu_hat = at.mu;
    fit.mu_se = std::sqrt(fit.covariance(2, 2));
  }
  fit.beta_hat = at.beta;
  for (std::size_t j = 0; j < layout.k; ++j) {
    const Eigen::Index c = layout.beta_offset() + static_cast<Eigen::Index>(j);
    fit.beta_se.push_back(std::sqrt(fit.covariance(c, c)));
  }
  fit.loglik = -best.value;
  fit.converged = true;
  fit.evaluations = evaluations;
  return fit;
}

}  // namespace panelprobit
