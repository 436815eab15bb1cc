#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "panelprobit/g_function.hpp"
#include "panelprobit/ratio_estimator.hpp"
#include "panelprobit/simulation.hpp"
#include "support.hpp"

using namespace panelprobit;
using testing::error_kind;

TEST_CASE("count_transitions") {
  const PanelData four(2, {0, 0, 0, 1, 1, 0, 1, 1});
  const TransitionCounts c = count_transitions(four);
  CHECK(c.n00 == 1);
  CHECK(c.n01 == 1);
  CHECK(c.n10 == 1);
  CHECK(c.n11 == 1);
  CHECK(c.total() == 4);

  const TransitionCounts empty = count_transitions(PanelData(2, {}));
  CHECK(empty.total() == 0);

  std::vector<std::uint8_t> tens;
  for (int i = 0; i < 10; ++i) tens.insert(tens.end(), {1, 0});
  const TransitionCounts t = count_transitions(PanelData(2, tens));
  CHECK(t.n10 == 10);
  CHECK(t.n00 + t.n01 + t.n11 == 0);

  CHECK(error_kind([] { count_transitions(PanelData(3, {0, 1, 1})); }) == ErrorKind::WrongHorizon);
}

TEST_CASE("estimate_gamma_ratio") {
  const RatioEstimate even = estimate_gamma_ratio({50, 100, 100, 70});
  CHECK(even.gamma_hat == 0.0);
  CHECK(even.w_hat == 1.0);
  CHECK(even.kappa_n == 10.0);
  CHECK(even.sigma2 == doctest::Approx(8.0 / std::numbers::pi).epsilon(1e-14));
  CHECK(even.se == doctest::Approx(0.1596).epsilon(1e-3));
  CHECK(even.se == doctest::Approx(std::sqrt(8.0 / std::numbers::pi) / 10.0).epsilon(1e-14));

  for (double c : {1.0, 7.0, 40.0}) {
    const auto n01 = static_cast<std::uint64_t>(std::llround(1000.0 * c));
    const auto n10 = static_cast<std::uint64_t>(std::llround(1000.0 * g_function(1.0) * c));
    CHECK(estimate_gamma_ratio({0, n01, n10, 0}).gamma_hat == doctest::Approx(1.0).epsilon(5e-3));
  }

  TransitionCounts zero10{5, 7, 0, 9};
  try {
    estimate_gamma_ratio(zero10);
    FAIL("expected DegenerateCounts");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateCounts);
    CHECK(e.details()["n10"] == 0);
    CHECK(e.details()["n01"] == 7);
  }
  CHECK(error_kind([] { estimate_gamma_ratio({5, 0, 7, 9}); }) == ErrorKind::DegenerateCounts);
}

TEST_CASE("scale invariance and stayer irrelevance") {
  const RatioEstimate base = estimate_gamma_ratio({12, 31, 17, 40});
  for (std::uint64_t m : {2u, 5u, 13u}) {
    const RatioEstimate scaled = estimate_gamma_ratio({12 * m, 31 * m, 17 * m, 40 * m});
    CHECK(scaled.gamma_hat == base.gamma_hat);
    CHECK(scaled.se == doctest::Approx(base.se / std::sqrt(static_cast<double>(m))).epsilon(1e-12));
  }
  CHECK(estimate_gamma_ratio({0, 31, 17, 0}).gamma_hat == base.gamma_hat);
  CHECK(estimate_gamma_ratio({9000, 31, 17, 1}).gamma_hat == base.gamma_hat);
}

TEST_CASE("error shrinks with sample size") {
  for (double gamma : {-1.0, 0.0, 1.0}) {
    double medians[2];
    int slot = 0;
    for (std::size_t n : {500u, 5000u}) {
      SimulationScenario s;
      s.n = n;
      s.gamma_true = gamma;
      s.tau = TauDistribution::normal(0.0, 25.0);
      s.replications = 100;
      s.seed = 4242;
      std::vector<double> errors;
      for (std::uint64_t r = 0; r < s.replications; ++r) {
        try {
          const RatioEstimate e = estimate_gamma_ratio(count_transitions(simulate_panel(s, r)));
          errors.push_back(std::abs(e.gamma_hat - gamma));
        } catch (const Error&) {
        }
      }
      REQUIRE(errors.size() > 90);
      std::nth_element(errors.begin(), errors.begin() + errors.size() / 2, errors.end());
      medians[slot++] = errors[errors.size() / 2];
    }
    CHECK(medians[1] < medians[0]);
  }
}
