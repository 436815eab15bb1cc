#pragma once

namespace panelprobit {

/// Standard normal distribution function, evaluated through erfc so that
/// both tails keep full relative precision.
double std_normal_cdf(double x) noexcept;

double std_normal_pdf(double x) noexcept;

/// log Phi(x), finite for every finite x.
double log_std_normal_cdf(double x) noexcept;

/// phi(x) / Phi(x).
double inverse_mills_ratio(double x) noexcept;

}  // namespace panelprobit
