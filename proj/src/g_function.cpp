#include "panelprobit/g_function.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "panelprobit/error.hpp"
#include "panelprobit/normal.hpp"

namespace panelprobit {
namespace {
constexpr double kSqrtPi = 1.7724538509055160273;
}

double g_function(double gamma) noexcept {
  return -kSqrtPi * gamma * std_normal_cdf(-gamma / std::numbers::sqrt2) + std::exp(-0.25 * gamma * gamma);
}

double g_derivative(double gamma) noexcept {
  return -kSqrtPi * std_normal_cdf(-gamma / std::numbers::sqrt2);
}

double g_inverse(double w) {
  if (!(w > 0.0) || !std::isfinite(w)) {
    throw Error(ErrorKind::NonPositiveRatio,
                "ratio must be positive and finite, got " + std::to_string(w), {{"w", w}});
  }
  if (w == 1.0) return 0.0;

  // G is decreasing: need g_function(lo) >= w >= g_function(hi).
  double lo = -1.0, hi = 1.0;
  while (g_function(lo) < w) {
    hi = lo;
    lo *= 2.0;
  }
  while (g_function(hi) > w) {
    lo = hi;
    hi *= 2.0;
  }

  double x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 400; ++iter) {
    const double residual = g_function(x) - w;
    if (std::abs(residual) <= 1e-15 * std::max(1.0, w)) return x;
    if (residual > 0.0) lo = x; else hi = x;
    const double slope = g_derivative(x);
    double next = x - residual / slope;
    const bool outside = !(next > lo && next < hi);
    if (outside || slope == 0.0) next = 0.5 * (lo + hi);
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) {
      return next;
    }
    x = next;
  }
  return x;
}

double k_link(double t) noexcept {
  const double a = g_function(t);
  const double b = g_function(-t);
  return a / (a + b);
}

double k_link_derivative(double t) noexcept {
  const double a = g_function(t);
  const double b = g_function(-t);
  const double s = a + b;
  return (g_derivative(t) * b + a * g_derivative(-t)) / (s * s);
}

double ratio_asymptotic_variance(double gamma) noexcept {
  const double g = g_function(gamma);
  const double d = g_derivative(gamma);
  return (g + g * g) / (d * d);
}

}  // namespace panelprobit
