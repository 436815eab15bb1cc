#pragma once

#include <initializer_list>
#include <span>
#include <vector>

#include "panelprobit/tau_distribution.hpp"

namespace panelprobit {

/// One factor Phi(slope * t + shift) of a product of normal CDFs.
struct PhiTerm {
  int slope = 1;  // +1 or -1
  double shift = 0.0;
};

/// Integrand prod_j Phi(slope_j * t + shift_j).
class PhiProductSpec {
 public:
  PhiProductSpec(std::initializer_list<PhiTerm> terms);
  explicit PhiProductSpec(std::vector<PhiTerm> terms);

  std::span<const PhiTerm> terms() const noexcept { return terms_; }
  double operator()(double t) const noexcept;

  double max_abs_shift() const noexcept;
  /// At least one +1 and one -1 slope; required for a finite integral over the line.
  bool has_mixed_slopes() const noexcept;
  /// Range [lo, hi] of the points t = -slope * shift where the factors switch on or off.
  std::pair<double, double> transition_range() const noexcept;

 private:
  std::vector<PhiTerm> terms_;
};

/// Integral over the real line of the product. Throws Error(DivergentIntegrand)
/// when all slopes share a sign.
double phi_product_integral(const PhiProductSpec& spec);

struct TauIntegralOptions {
  int hermite_nodes = 64;
  /// Normal components with sd at or below this use Gauss-Hermite; wider ones use
  /// composite Gauss-Legendre, since a fixed Hermite rule cannot resolve the unit-scale
  /// switch of Phi once the prior is much wider than it.
  double hermite_max_sd = 1.0;
};

/// Integral of the product against the individual-effect density f.
double tau_weighted_integral(const PhiProductSpec& spec, const TauDistribution& prior,
                             const TauIntegralOptions& options = {});

}  // namespace panelprobit
