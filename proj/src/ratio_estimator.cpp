#include "panelprobit/ratio_estimator.hpp"

#include <cmath>
#include <string>

#include "panelprobit/error.hpp"
#include "panelprobit/g_function.hpp"

namespace panelprobit {

TransitionCounts count_transitions(const PanelData& panel) {
  if (panel.horizon() != 2) {
    throw Error(ErrorKind::WrongHorizon,
                "ratio estimator needs T = 2, panel has T = " + std::to_string(panel.horizon()),
                {{"horizon", panel.horizon()}});
  }
  TransitionCounts counts;
  for (std::size_t i = 0; i < panel.size(); ++i) {
    const int cell = 2 * panel.outcome(i, 0) + panel.outcome(i, 1);
    switch (cell) {
      case 0: ++counts.n00; break;
      case 1: ++counts.n01; break;
      case 2: ++counts.n10; break;
      default: ++counts.n11; break;
    }
  }
  return counts;
}

RatioEstimate estimate_gamma_ratio(const TransitionCounts& counts) {
  if (counts.n01 == 0 || counts.n10 == 0) {
    const std::string which = counts.n01 == 0 ? "n01 = 0 (ratio is infinite)" : "n10 = 0 (gamma_hat = +inf)";
    throw Error(ErrorKind::DegenerateCounts, "ratio estimator undefined: " + which,
                {{"n00", counts.n00}, {"n01", counts.n01}, {"n10", counts.n10}, {"n11", counts.n11}});
  }
  RatioEstimate est;
  est.w_hat = static_cast<double>(counts.n10) / static_cast<double>(counts.n01);
  est.gamma_hat = g_inverse(est.w_hat);
  est.kappa_n = std::sqrt(static_cast<double>(counts.n01));
  est.sigma2 = ratio_asymptotic_variance(est.gamma_hat);
  est.se = std::sqrt(est.sigma2) / est.kappa_n;
  return est;
}

}  // namespace panelprobit
