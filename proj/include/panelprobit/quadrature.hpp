#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace panelprobit {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
};

/// Gauss-Legendre rule on [-1, 1]. Rules are built once per order and shared;
/// the returned reference stays valid for the lifetime of the program.
const QuadratureRule& gauss_legendre_rule(int order);

/// Gauss-Hermite rule for the standard normal weight:
/// sum_i w_i g(z_i) approximates E[g(Z)], Z ~ N(0, 1). The weights sum to one.
const QuadratureRule& gauss_hermite_rule(int order);

inline constexpr int kPanelOrder = 20;

/// The kPanelOrder-point Legendre rule, resolved once without locking.
const QuadratureRule& panel_rule();

/// Composite Gauss-Legendre over [a, b] using panels no wider than
/// max_width. Panel edges depend only on (a, b, max_width).
template <class F>
double integrate_panels(F&& f, double a, double b, double max_width,
                        int order = kPanelOrder) {
  if (!(b > a)) return 0.0;
  const QuadratureRule& rule = order == kPanelOrder ? panel_rule() : gauss_legendre_rule(order);
  const auto panels = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / max_width)));
  const double width = (b - a) / static_cast<double>(panels);
  const double half = 0.5 * width;
  double total = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = a + (static_cast<double>(p) + 0.5) * width;
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
    total += half * acc;
  }
  return total;
}

}  // namespace panelprobit
