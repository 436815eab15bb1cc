#pragma once

#include <cstdint>

#include "panelprobit/panel.hpp"

namespace panelprobit {

/// Cell counts of (d1, d2) over a two-wave panel.
struct TransitionCounts {
  std::uint64_t n00 = 0;
  std::uint64_t n01 = 0;
  std::uint64_t n10 = 0;
  std::uint64_t n11 = 0;

  std::uint64_t total() const noexcept { return n00 + n01 + n10 + n11; }
};

struct RatioEstimate {
  double gamma_hat = 0.0;
  double w_hat = 0.0;    // n10 / n01
  double kappa_n = 0.0;  // sqrt(n01)
  double sigma2 = 0.0;   // asymptotic variance at gamma_hat
  double se = 0.0;       // sqrt(sigma2) / kappa_n
};

/// Throws Error(WrongHorizon) unless the panel has exactly two waves.
TransitionCounts count_transitions(const PanelData& panel);

/// gamma_hat = G^{-1}(n10 / n01). Only the switcher cells enter.
/// Throws Error(DegenerateCounts) when n10 or n01 is zero.
RatioEstimate estimate_gamma_ratio(const TransitionCounts& counts);

}  // namespace panelprobit
