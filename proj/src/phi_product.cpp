#include "panelprobit/phi_product.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "panelprobit/error.hpp"
#include "panelprobit/normal.hpp"
#include "panelprobit/quadrature.hpp"

namespace panelprobit {
namespace {

// Beyond this distance from every switch point each factor is within
// Phi(-12) ~ 2e-33 of 0 or 1.
constexpr double kTailRadius = 12.0;

// Composite Gauss-Legendre over [a, b], fine panels inside [zone_lo, zone_hi]
// and coarse ones outside it.
template <class F>
double integrate_zoned(F&& f, double a, double b, double zone_lo, double zone_hi,
                       double fine_width, double coarse_width) {
  double total = 0.0;
  const double lo = std::clamp(zone_lo, a, b);
  const double hi = std::clamp(zone_hi, a, b);
  total += integrate_panels(f, a, lo, coarse_width);
  total += integrate_panels(f, lo, hi, fine_width);
  total += integrate_panels(f, hi, b, coarse_width);
  return total;
}

double normal_component(const PhiProductSpec& spec, double mean, double variance,
                        const TauIntegralOptions& options) {
  const double sd = std::sqrt(variance);
  if (sd <= options.hermite_max_sd) {
    const QuadratureRule& rule = gauss_hermite_rule(options.hermite_nodes);
    double total = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) total += rule.weights[i] * spec(mean + sd * rule.nodes[i]);
    return total;
  }
  const auto [t_lo, t_hi] = spec.transition_range();
  const auto integrand = [&](double x) {
    const double z = (x - mean) / sd;
    return spec(x) * std_normal_pdf(z) / sd;
  };
  const double reach = 13.0 * sd;
  return integrate_zoned(integrand, mean - reach, mean + reach, t_lo - kTailRadius,
                         t_hi + kTailRadius, std::min(1.0, 0.25 * sd), 0.25 * sd);
}

}  // namespace

PhiProductSpec::PhiProductSpec(std::initializer_list<PhiTerm> terms)
    : PhiProductSpec(std::vector<PhiTerm>(terms)) {}

PhiProductSpec::PhiProductSpec(std::vector<PhiTerm> terms) : terms_(std::move(terms)) {
  for (const PhiTerm& term : terms_) {
    if (term.slope != 1 && term.slope != -1) throw std::invalid_argument("PhiTerm slope must be +1 or -1");
    if (!std::isfinite(term.shift)) throw std::invalid_argument("PhiTerm shift must be finite");
  }
}

double PhiProductSpec::operator()(double t) const noexcept {
  double product = 1.0;
  for (const PhiTerm& term : terms_) product *= std_normal_cdf(term.slope * t + term.shift);
  return product;
}

double PhiProductSpec::max_abs_shift() const noexcept {
  double m = 0.0;
  for (const PhiTerm& term : terms_) m = std::max(m, std::abs(term.shift));
  return m;
}

bool PhiProductSpec::has_mixed_slopes() const noexcept {
  const bool up = std::any_of(terms_.begin(), terms_.end(), [](const PhiTerm& t) { return t.slope > 0; });
  const bool down = std::any_of(terms_.begin(), terms_.end(), [](const PhiTerm& t) { return t.slope < 0; });
  return up && down;
}

std::pair<double, double> PhiProductSpec::transition_range() const noexcept {
  if (terms_.empty()) return {0.0, 0.0};
  double lo = INFINITY, hi = -INFINITY;
  for (const PhiTerm& term : terms_) {
    const double at = -term.slope * term.shift;
    lo = std::min(lo, at);
    hi = std::max(hi, at);
  }
  return {lo, hi};
}

double phi_product_integral(const PhiProductSpec& spec) {
  if (!spec.has_mixed_slopes()) {
    throw Error(ErrorKind::DivergentIntegrand,
                "product of normal CDFs needs factors with both slope signs to be integrable");
  }
  // Radius is piecewise constant in the shifts so that nearby shifts share nodes.
  const double radius = kTailRadius + std::ceil(spec.max_abs_shift());
  return integrate_panels(spec, -radius, radius, 1.0);
}

double tau_weighted_integral(const PhiProductSpec& spec, const TauDistribution& prior,
                             const TauIntegralOptions& options) {
  return std::visit(
      [&](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, NormalTau>) {
          return normal_component(spec, d.mean, d.variance, options);
        } else if constexpr (std::is_same_v<T, MixtureNormalTau>) {
          return d.weight * normal_component(spec, d.mean1, d.variance1, options) +
                 (1.0 - d.weight) * normal_component(spec, d.mean2, d.variance2, options);
        } else if constexpr (std::is_same_v<T, UniformTau>) {
          const auto [t_lo, t_hi] = spec.transition_range();
          const double density = 1.0 / (d.upper - d.lower);
          const auto integrand = [&](double x) { return spec(x) * density; };
          return integrate_zoned(integrand, d.lower, d.upper, t_lo - kTailRadius, t_hi + kTailRadius,
                                 1.0, 4.0);
        } else {
          throw Error(ErrorKind::UnsupportedPrior, "unsupported individual-effect family");
        }
      },
      prior.variant());
}

}  // namespace panelprobit
