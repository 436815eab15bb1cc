#include <cmath>
#include <random>

#include "doctest.h"
#include "panelprobit/conditional_glm.hpp"
#include "panelprobit/g_function.hpp"
#include "support.hpp"

using namespace panelprobit;
using testing::error_kind;

namespace {

SwitcherDesign design_from(const Eigen::MatrixXd& dx, const Eigen::VectorXd& z, bool dynamic) {
  SwitcherDesign d;
  d.delta_x = dx;
  d.z = z;
  d.include_intercept = dynamic;
  for (Eigen::Index i = 0; i < dx.rows(); ++i) d.individuals.push_back(static_cast<std::size_t>(i));
  return d;
}

// Switchers drawn from the limiting conditional model.
SwitcherDesign simulate_switchers(std::size_t m, double gamma, const Eigen::VectorXd& beta, bool dynamic,
                                  std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::MatrixXd dx(m, beta.size());
  Eigen::VectorXd z(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < beta.size(); ++j) dx(i, j) = normal(rng);
    const double eta = dx.row(i).dot(beta);
    const double p = dynamic ? conditional_prob(gamma, eta) : conditional_prob(eta);
    z(i) = unif(rng) < p ? 1.0 : 0.0;
  }
  return design_from(dx, z, dynamic);
}

}  // namespace

TEST_CASE("build_switcher_design") {
  const PanelData panel(2, {1, 0, 0, 0, 0, 1}, 1, {0.5, 1.5, 2.0, 2.0, -1.0, 3.0});
  const SwitcherDesign d = build_switcher_design(panel, false);
  REQUIRE(d.rows() == 2);
  CHECK(d.z(0) == 1.0);
  CHECK(d.z(1) == 0.0);
  CHECK(d.delta_x(0, 0) == 1.0);
  CHECK(d.delta_x(1, 0) == 4.0);
  CHECK(d.individuals == std::vector<std::size_t>{0, 2});

  const PanelData flat(2, {1, 0, 0, 1}, 1, {0.3, 0.3, 0.7, 0.7});
  const SwitcherDesign zero = build_switcher_design(flat, false);
  CHECK(zero.delta_x.isZero());
  CHECK(identifiability_check(zero).verdict == Verdict::Fail);

  const PanelData two(2, {1, 0, 0, 1, 1, 0}, 2, {0, 0, 1, 2, 0, 0, 3, 1, 1, 1, 0, 0});
  const SwitcherDesign k2 = build_switcher_design(two, true);
  CHECK(k2.delta_x.rows() == 3);
  CHECK(k2.delta_x.cols() == 2);
  CHECK(k2.parameter_count() == 3);
  CHECK(k2.parameter_names() == std::vector<std::string>{"gamma", "beta1", "beta2"});

  CHECK(error_kind([] { build_switcher_design(PanelData(2, {0, 0, 1, 1}, 1, {0, 1, 2, 3}), false); }) ==
        ErrorKind::NoSwitchers);
  CHECK(error_kind([] { build_switcher_design(PanelData(3, {0, 0, 1}, 0), true); }) == ErrorKind::WrongHorizon);
}

TEST_CASE("conditional probabilities") {
  CHECK(conditional_prob(0.0, 0.0) == 0.5);
  for (double eta : {-2.0, -0.3, 0.0, 1.1}) {
    CHECK(conditional_prob(eta) == k_link(eta));
    CHECK(conditional_prob(0.0, eta) == doctest::Approx(k_link(eta)).epsilon(1e-14));
  }
  CHECK(conditional_prob(1.0, 0.0) == doctest::Approx(0.3538 / 1.3538).epsilon(2e-4));
  CHECK(conditional_prob(1.0, 0.0) == doctest::Approx(g_function(1.0) / (g_function(1.0) + 1.0)).epsilon(1e-14));

  const double h = 1e-6;
  for (double g : {-1.5, 0.0, 0.8}) {
    for (double eta : {-2.0, 0.0, 1.3}) {
      const LinkPartials lp = conditional_prob_partials(g, eta);
      CHECK(lp.p == doctest::Approx(conditional_prob(g, eta)).epsilon(1e-15));
      const double dg = (conditional_prob(g + h, eta) - conditional_prob(g - h, eta)) / (2 * h);
      const double de = (conditional_prob(g, eta + h) - conditional_prob(g, eta - h)) / (2 * h);
      CHECK(std::abs(lp.dp_dgamma - dg) < 1e-8);
      CHECK(std::abs(lp.dp_dindex - de) < 1e-8);
    }
  }
}

TEST_CASE("identifiability_check") {
  Eigen::MatrixXd basis(4, 3);
  basis << 1, 0, 0, 0, 1, 0, 0, 0, 1, -1, -1, -1;
  const auto pass = identifiability_check(design_from(basis, Eigen::VectorXd::Zero(4), true));
  CHECK(pass.verdict == Verdict::Pass);
  CHECK(pass.rank == 3);
  CHECK(pass.augmented_full_rank);

  const auto fail = identifiability_check(design_from(Eigen::MatrixXd::Zero(5, 2), Eigen::VectorXd::Zero(5), true));
  CHECK(fail.verdict == Verdict::Fail);
  CHECK(fail.rank == 0);

  Eigen::MatrixXd positive(4, 1);
  positive << 0.5, 1.0, 2.0, 3.5;
  CHECK(identifiability_check(design_from(positive, Eigen::VectorXd::Zero(4), true)).verdict == Verdict::Warn);
  CHECK(identifiability_check(design_from(positive, Eigen::VectorXd::Zero(4), false)).verdict == Verdict::Pass);
}

TEST_CASE("fit on separated data diverges") {
  Eigen::MatrixXd dx(4, 1);
  dx << 0.3, -1.2, 0.8, 2.0;
  const auto d = design_from(dx, Eigen::VectorXd::Ones(4), true);
  const ErrorKind kind = error_kind([&] { fit_conditional(d); });
  CHECK((kind == ErrorKind::Diverged || kind == ErrorKind::RankDeficient));
}

TEST_CASE("null static model") {
  Eigen::VectorXd beta0 = Eigen::VectorXd::Zero(2);
  const SwitcherDesign d = simulate_switchers(2000, 0.0, beta0, false, 17);
  const GlmFit fit = fit_conditional(d);
  REQUIRE(fit.converged);
  CHECK_FALSE(fit.has_gamma());
  for (Eigen::Index j = 0; j < 2; ++j) CHECK(std::abs(fit.coefficients(j)) < 3.0 * fit.se(j));
}

TEST_CASE("dynamic fit properties") {
  Eigen::VectorXd beta(2);
  beta << 0.5, -0.8;
  const SwitcherDesign d = simulate_switchers(3000, 0.7, beta, true, 99);
  const GlmFit fit = fit_conditional(d);
  REQUIRE(fit.converged);
  CHECK(fit.has_gamma());
  CHECK(std::abs(fit.coefficients(0) - 0.7) < 4.0 * fit.se(0));
  CHECK(std::abs(fit.coefficients(1) - 0.5) < 4.0 * fit.se(1));
  CHECK(std::abs(fit.coefficients(2) + 0.8) < 4.0 * fit.se(2));

  CHECK(conditional_score(d, fit.coefficients).lpNorm<Eigen::Infinity>() <= 1e-6);
  for (std::size_t i = 1; i < fit.deviance_trace.size(); ++i)
    CHECK(fit.deviance_trace[i] <= fit.deviance_trace[i - 1] + 1e-9);

  const Eigen::MatrixXd sym = fit.covariance - fit.covariance.transpose();
  CHECK(sym.norm() < 1e-10 * fit.covariance.norm());
  CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(fit.covariance).eigenvalues().minCoeff() > 0.0);

  SwitcherDesign swapped = d;
  swapped.delta_x.col(0) = d.delta_x.col(1);
  swapped.delta_x.col(1) = d.delta_x.col(0);
  const GlmFit sf = fit_conditional(swapped);
  CHECK(sf.coefficients(0) == doctest::Approx(fit.coefficients(0)).epsilon(1e-7));
  CHECK(sf.coefficients(1) == doctest::Approx(fit.coefficients(2)).epsilon(1e-7));
  CHECK(sf.coefficients(2) == doctest::Approx(fit.coefficients(1)).epsilon(1e-7));
}

TEST_CASE("rank deficient design") {
  Eigen::MatrixXd dx(6, 2);
  dx << 1, 2, -1, -2, 0.5, 1, 2, 4, -3, -6, 1, 2;
  Eigen::VectorXd z(6);
  z << 1, 0, 1, 0, 0, 1;
  CHECK(error_kind([&] { fit_conditional(design_from(dx, z, false)); }) == ErrorKind::RankDeficient);
}
