#include "panelprobit/conditional_glm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "panelprobit/error.hpp"
#include "panelprobit/g_function.hpp"

namespace panelprobit {
namespace {

double clamp_probability(double p, double floor) { return std::clamp(p, floor, 1.0 - floor); }

// Linear index x'beta and gamma for every row.
void split_parameters(const SwitcherDesign& design, const Eigen::VectorXd& theta, double& gamma,
                      Eigen::VectorXd& index) {
  gamma = design.include_intercept ? theta(0) : 0.0;
  const Eigen::Index k = design.covariate_dim();
  if (k == 0) {
    index = Eigen::VectorXd::Zero(design.rows());
  } else {
    index = design.delta_x * theta.tail(k);
  }
}

// Rows dp_i / dtheta.
Eigen::MatrixXd jacobian(const SwitcherDesign& design, double gamma, const Eigen::VectorXd& index,
                         Eigen::VectorXd& p) {
  const Eigen::Index m = design.rows();
  const Eigen::Index k = design.covariate_dim();
  const Eigen::Index offset = design.include_intercept ? 1 : 0;
  Eigen::MatrixXd jac(m, design.parameter_count());
  p.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const LinkPartials lp = conditional_prob_partials(gamma, index(i));
    p(i) = lp.p;
    if (design.include_intercept) jac(i, 0) = lp.dp_dgamma;
    if (k > 0) jac.row(i).segment(offset, k) = lp.dp_dindex * design.delta_x.row(i);
  }
  return jac;
}

double deviance_at(const SwitcherDesign& design, const Eigen::VectorXd& theta, double floor) {
  return -2.0 * conditional_loglik(design, theta, floor);
}

}  // namespace

std::vector<std::string> SwitcherDesign::parameter_names() const {
  std::vector<std::string> names;
  if (include_intercept) names.emplace_back("gamma");
  for (Eigen::Index j = 0; j < covariate_dim(); ++j) names.push_back("beta" + std::to_string(j + 1));
  return names;
}

SwitcherDesign build_switcher_design(const PanelData& panel, bool dynamic) {
  if (panel.horizon() != 2) {
    throw Error(ErrorKind::WrongHorizon,
                "conditional GLM needs T = 2, panel has T = " + std::to_string(panel.horizon()),
                {{"horizon", panel.horizon()}});
  }
  const std::size_t k = panel.covariate_dim();
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < panel.size(); ++i)
    if (panel.outcome(i, 0) + panel.outcome(i, 1) == 1) rows.push_back(i);
  if (rows.empty()) {
    throw Error(ErrorKind::NoSwitchers, "no individual changes state between the two waves",
                {{"n", panel.size()}});
  }

  SwitcherDesign design;
  design.include_intercept = dynamic;
  design.delta_x.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(k));
  design.z.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::size_t i = rows[r];
    const auto x1 = panel.covariates(i, 0);
    const auto x2 = panel.covariates(i, 1);
    for (std::size_t j = 0; j < k; ++j)
      design.delta_x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = x2[j] - x1[j];
    design.z(static_cast<Eigen::Index>(r)) = panel.outcome(i, 0) == 1 ? 1.0 : 0.0;
  }
  design.individuals = std::move(rows);
  return design;
}

double conditional_prob(double gamma, double index) noexcept {
  const double a = g_function(gamma + index);
  const double b = g_function(-index);
  return a / (a + b);
}

double conditional_prob(double index) noexcept { return k_link(index); }

LinkPartials conditional_prob_partials(double gamma, double index) noexcept {
  const double a = g_function(gamma + index);
  const double b = g_function(-index);
  const double da = g_derivative(gamma + index);
  const double db = -g_derivative(-index);  // d/d(index) of G(-index)
  const double s = a + b;
  LinkPartials out;
  out.p = a / s;
  out.dp_dgamma = da * b / (s * s);
  out.dp_dindex = (da * b - a * db) / (s * s);
  return out;
}

double conditional_loglik(const SwitcherDesign& design, const Eigen::VectorXd& theta,
                          double probability_floor) {
  double gamma = 0.0;
  Eigen::VectorXd index;
  split_parameters(design, theta, gamma, index);
  double ll = 0.0;
  for (Eigen::Index i = 0; i < design.rows(); ++i) {
    const double p = clamp_probability(conditional_prob(gamma, index(i)), probability_floor);
    ll += design.z(i) > 0.5 ? std::log(p) : std::log1p(-p);
  }
  return ll;
}

Eigen::VectorXd conditional_score(const SwitcherDesign& design, const Eigen::VectorXd& theta,
                                  double probability_floor) {
  double gamma = 0.0;
  Eigen::VectorXd index, p;
  split_parameters(design, theta, gamma, index);
  const Eigen::MatrixXd jac = jacobian(design, gamma, index, p);
  Eigen::VectorXd resid(design.rows());
  for (Eigen::Index i = 0; i < design.rows(); ++i) {
    const double pc = clamp_probability(p(i), probability_floor);
    resid(i) = (design.z(i) - p(i)) / (pc * (1.0 - pc));
  }
  return jac.transpose() * resid;
}

GlmFit fit_conditional(const SwitcherDesign& design, const IrlsOptions& options) {
  const Eigen::Index q = design.parameter_count();
  const Eigen::Index m = design.rows();
  if (q == 0) throw Error(ErrorKind::RankDeficient, "static model without covariates has no parameters");
  if (m < q) {
    throw Error(ErrorKind::RankDeficient, "fewer switchers than parameters",
                {{"switchers", m}, {"parameters", q}});
  }
  const IdentifiabilityReport ident = identifiability_check(design);
  if (ident.verdict == Verdict::Fail) {
    throw Error(ErrorKind::RankDeficient, ident.reason, {{"rank", ident.rank}, {"k", design.covariate_dim()}});
  }

  const double floor = options.probability_floor;
  GlmFit fit;
  fit.names = design.parameter_names();
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(q);
  double deviance = deviance_at(design, theta, floor);
  fit.deviance_trace.push_back(deviance);

  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    fit.iterations = iter;
    double gamma = 0.0;
    Eigen::VectorXd index, p;
    split_parameters(design, theta, gamma, index);
    Eigen::MatrixXd jac = jacobian(design, gamma, index, p);

    // Weighted least squares: rows scaled by sqrt(w_i), w_i = 1 / (p_i (1 - p_i)).
    Eigen::VectorXd rhs(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const double pc = clamp_probability(p(i), floor);
      const double root_w = 1.0 / std::sqrt(pc * (1.0 - pc));
      jac.row(i) *= root_w;
      rhs(i) = (design.z(i) - p(i)) * root_w;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(jac);
    qr.setThreshold(1e-12);
    if (qr.rank() < q) {
      throw Error(ErrorKind::RankDeficient, "weighted design lost rank during IRLS",
                  {{"rank", qr.rank()}, {"parameters", q}, {"iteration", iter}});
    }
    const Eigen::VectorXd step = qr.solve(rhs);

    double scale = 1.0;
    Eigen::VectorXd candidate = theta + step;
    double candidate_dev = deviance_at(design, candidate, floor);
    int halvings = 0;
    while (!(std::isfinite(candidate_dev) && candidate_dev <= deviance + 1e-12 * (std::abs(deviance) + 1.0))) {
      if (++halvings > 40) break;
      scale *= 0.5;
      candidate = theta + scale * step;
      candidate_dev = deviance_at(design, candidate, floor);
    }
    if (halvings > 40) {
      // No ascent direction left at working precision.
      fit.converged = step.lpNorm<Eigen::Infinity>() <= 1e-6 * (1.0 + theta.lpNorm<Eigen::Infinity>());
      break;
    }
    if (candidate.lpNorm<Eigen::Infinity>() > options.divergence_bound) {
      throw Error(ErrorKind::Diverged, "IRLS coefficients diverge (likelihood maximized at infinity)",
                  {{"iteration", iter}, {"max_abs_coefficient", candidate.lpNorm<Eigen::Infinity>()}});
    }
    const double change = std::abs(deviance - candidate_dev) / (std::abs(candidate_dev) + 0.1);
    const double moved = (candidate - theta).lpNorm<Eigen::Infinity>();
    theta = candidate;
    deviance = candidate_dev;
    fit.deviance_trace.push_back(deviance);
    if (change < options.deviance_tolerance && moved <= 1e-8 * (1.0 + theta.lpNorm<Eigen::Infinity>())) {
      fit.converged = true;
      break;
    }
  }

  fit.coefficients = theta;
  fit.deviance = deviance;

  // Observed information from central differences of the analytic score.
  Eigen::MatrixXd info(q, q);
  for (Eigen::Index j = 0; j < q; ++j) {
    const double h = 1e-5 * (1.0 + std::abs(theta(j)));
    Eigen::VectorXd up = theta, down = theta;
    up(j) += h;
    down(j) -= h;
    info.col(j) = -(conditional_score(design, up, floor) - conditional_score(design, down, floor)) / (2.0 * h);
  }
  info = 0.5 * (info + info.transpose()).eval();
  Eigen::LLT<Eigen::MatrixXd> llt(info);
  if (llt.info() == Eigen::Success) {
    fit.covariance = llt.solve(Eigen::MatrixXd::Identity(q, q));
    fit.covariance_source = "observed";
  } else {
    double gamma = 0.0;
    Eigen::VectorXd index, p;
    split_parameters(design, theta, gamma, index);
    const Eigen::MatrixXd jac = jacobian(design, gamma, index, p);
    Eigen::VectorXd w(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const double pc = clamp_probability(p(i), floor);
      w(i) = 1.0 / (pc * (1.0 - pc));
    }
    const Eigen::MatrixXd expected = jac.transpose() * w.asDiagonal() * jac;
    fit.covariance = expected.ldlt().solve(Eigen::MatrixXd::Identity(q, q));
    fit.covariance_source = "expected";
  }
  return fit;
}

std::string_view to_string(Verdict verdict) noexcept {
  switch (verdict) {
    case Verdict::Pass: return "pass";
    case Verdict::Warn: return "warn";
    case Verdict::Fail: return "fail";
  }
  return "unknown";
}

IdentifiabilityReport identifiability_check(const SwitcherDesign& design) {
  IdentifiabilityReport report;
  const Eigen::Index m = design.rows();
  const Eigen::Index k = design.covariate_dim();

  // Column-pivoted QR of X*' picks k linearly independent switcher rows.
  Eigen::MatrixXd rows_as_cols = design.delta_x.transpose();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(rows_as_cols);
  qr.setThreshold(1e-10);
  report.rank = k == 0 || m == 0 ? 0 : qr.rank();

  Eigen::MatrixXd augmented(m, k + 1);
  augmented.col(0).setOnes();
  augmented.rightCols(k) = design.delta_x;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> aug_qr(augmented);
  aug_qr.setThreshold(1e-10);
  report.augmented_full_rank = m > 0 && aug_qr.rank() == k + 1;

  if (report.rank < k) {
    report.verdict = Verdict::Fail;
    report.reason = "covariate differences have rank " + std::to_string(report.rank) + " < k = " + std::to_string(k);
    return report;
  }
  if (!design.include_intercept || k == 0) {
    report.verdict = Verdict::Pass;
    report.reason = design.include_intercept ? "no covariates; gamma identified by the switch counts"
                                             : "covariate differences have full column rank";
    return report;
  }

  const auto& perm = qr.colsPermutation().indices();
  Eigen::MatrixXd basis(k, k);
  std::vector<bool> in_basis(static_cast<std::size_t>(m), false);
  for (Eigen::Index j = 0; j < k; ++j) {
    basis.col(j) = rows_as_cols.col(perm(j));
    in_basis[static_cast<std::size_t>(perm(j))] = true;
  }
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(basis);
  for (Eigen::Index r = 0; r < m; ++r) {
    if (in_basis[static_cast<std::size_t>(r)]) continue;
    const Eigen::VectorXd coef = lu.solve(rows_as_cols.col(r));
    if ((basis * coef - rows_as_cols.col(r)).norm() > 1e-8 * (1.0 + rows_as_cols.col(r).norm())) continue;
    if ((coef.array() <= 1e-12).all()) {
      report.verdict = Verdict::Pass;
      report.reason = "switcher " + std::to_string(r) + " is a non-positive combination of a pivot basis";
      return report;
    }
  }
  report.verdict = Verdict::Warn;
  report.reason = "no switcher row is a non-positive combination of the pivot basis (sufficient condition unverified)";
  return report;
}

}  // namespace panelprobit
