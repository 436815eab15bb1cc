#pragma once

// The limiting odds-ratio map of the dynamic probit model and the link derived
// from it.
//
//   G(g) = -sqrt(pi) * g * Phi(-g / sqrt 2) + exp(-g^2 / 4)
//   K(t) = G(t) / (G(t) + G(-t))
//
// G is a strictly decreasing bijection from the real line onto (0, inf) with
// G(0) = 1. It equals sqrt(pi) times the integral over the real line of
// Phi(x) Phi(-x - g), so G(g) is the large-effect limit of
// P(d1=1, d2=0) / P(d1=0, d2=1).

namespace panelprobit {

double g_function(double gamma) noexcept;

/// G'(g) = -sqrt(pi) * Phi(-g / sqrt 2). Always negative.
double g_derivative(double gamma) noexcept;

/// Unique g with G(g) = w. Throws Error(NonPositiveRatio) unless 0 < w < inf.
double g_inverse(double w);

/// K(t) = G(t) / (G(t) + G(-t)); strictly decreasing, K(t) + K(-t) = 1.
double k_link(double t) noexcept;

double k_link_derivative(double t) noexcept;

/// sigma^2(g) = (G + G^2) / G'^2, the asymptotic variance of the ratio
/// estimator scaled by the square root of the 0->1 switcher count.
double ratio_asymptotic_variance(double gamma) noexcept;

}  // namespace panelprobit
