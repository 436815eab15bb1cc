#pragma once

#include <cmath>
#include <functional>

#include "doctest.h"
#include "panelprobit/error.hpp"

namespace testing {

// Plain trapezoid rule on a uniform grid. Shares nothing with the library's
// quadrature, and converges geometrically for smooth integrands that vanish at the ends.
inline double trapezoid(const std::function<double(double)>& f, double a, double b, int intervals) {
  const double h = (b - a) / intervals;
  double sum = 0.5 * (f(a) + f(b));
  for (int i = 1; i < intervals; ++i) sum += f(a + i * h);
  return sum * h;
}

inline double phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

template <class F>
panelprobit::ErrorKind error_kind(F&& f) {
  try {
    f();
  } catch (const panelprobit::Error& e) {
    return e.kind();
  }
  FAIL("expected panelprobit::Error");
  return panelprobit::ErrorKind::UsageError;
}

}  // namespace testing
