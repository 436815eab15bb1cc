#include "panelprobit/normal.hpp"

#include <cmath>
#include <numbers>

namespace panelprobit {
namespace {

// erfc loses relative accuracy as it nears underflow (x around -37); the
// asymptotic series takes over well before that.
constexpr double kSeriesBelow = -20.0;

// -x Phi(x) / phi(x) = 1 - 1/x^2 + 3/x^4 - 15/x^6 + ...  for x << 0
double tail_series(double x) noexcept {
  const double r = 1.0 / (x * x);
  double term = 1.0, sum = 1.0;
  for (int k = 1; k <= 12; ++k) {
    term *= -(2.0 * k - 1.0) * r;
    sum += term;
  }
  return sum;
}

}  // namespace

double std_normal_cdf(double x) noexcept {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double std_normal_pdf(double x) noexcept {
  constexpr double inv_sqrt_2pi = 0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2;
  return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

double log_std_normal_cdf(double x) noexcept {
  if (x > 0.0) return std::log1p(-0.5 * std::erfc(x / std::numbers::sqrt2));
  if (x > kSeriesBelow) return std::log(std_normal_cdf(x));
  const double log_sqrt_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
  return -0.5 * x * x - std::log(-x) - log_sqrt_2pi + std::log(tail_series(x));
}

double inverse_mills_ratio(double x) noexcept {
  if (x > kSeriesBelow) return std_normal_pdf(x) / std_normal_cdf(x);
  return -x / tail_series(x);
}

}  // namespace panelprobit
