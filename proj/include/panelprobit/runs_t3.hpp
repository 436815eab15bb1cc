#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "panelprobit/panel.hpp"

namespace panelprobit {

/// Counts of the eight T = 3 outcome patterns, stored in the order
/// 000, 001, 010, 100, 110, 011, 101, 111.
struct RunsCounts {
  std::array<std::uint64_t, 8> n{};

  static constexpr std::array<std::string_view, 8> kPatterns{"000", "001", "010", "100",
                                                             "110", "011", "101", "111"};

  std::uint64_t& operator[](std::string_view pattern);
  std::uint64_t operator[](std::string_view pattern) const;

  std::uint64_t n000() const noexcept { return n[0]; }
  std::uint64_t n001() const noexcept { return n[1]; }
  std::uint64_t n010() const noexcept { return n[2]; }
  std::uint64_t n100() const noexcept { return n[3]; }
  std::uint64_t n110() const noexcept { return n[4]; }
  std::uint64_t n011() const noexcept { return n[5]; }
  std::uint64_t n101() const noexcept { return n[6]; }
  std::uint64_t n111() const noexcept { return n[7]; }

  /// Sequences with exactly one 1, and with exactly two.
  std::uint64_t group1_total() const noexcept { return n[1] + n[2] + n[3]; }
  std::uint64_t group2_total() const noexcept { return n[4] + n[5] + n[6]; }
  std::uint64_t total() const noexcept;
};

/// Within-group pattern probabilities in the wide-effects limit.
struct T3Probabilities {
  double p001 = 0.0, p010 = 0.0, p100 = 0.0;  // sum to one
  double p110 = 0.0, p011 = 0.0, p101 = 0.0;  // sum to one
};

T3Probabilities t3_probabilities(double gamma);

/// sum over the six informative patterns of n_pattern * log p_pattern(gamma).
double t3_loglik(double gamma, const RunsCounts& counts);

/// Tally a T = 3 panel. Throws Error(WrongHorizon) otherwise.
RunsCounts tabulate_runs(const PanelData& panel);

/// One individual per counted sequence, in pattern order.
PanelData expand_runs(const RunsCounts& counts);

struct T3Estimate {
  double gamma_hat = 0.0;
  std::optional<double> se;  // absent when the curvature at the optimum is not negative
  double loglik = 0.0;
  double curvature = 0.0;    // d^2 loglik / d gamma^2 at gamma_hat
  bool non_concave = false;
  int iterations = 0;
  double bracket_lower = -6.0;
  double bracket_upper = 6.0;
};

/// Maximizes t3_loglik by Brent's method on [-6, 6], widening the bracket while the
/// optimum sits on an endpoint. Throws Error(DegenerateCounts) when a group is empty
/// and Error(Diverged) when the optimum keeps running to the boundary.
T3Estimate estimate_gamma_t3(const RunsCounts& counts);

}  // namespace panelprobit
