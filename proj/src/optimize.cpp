#include "panelprobit/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace panelprobit {

ScalarMinimum brent_minimize(const std::function<double(double)>& f, double lower, double upper,
                             double x_tolerance, int max_iterations) {
  constexpr double golden = 0.3819660112501051;  // (3 - sqrt(5)) / 2
  constexpr double tiny = 1e-12;
  double a = std::min(lower, upper);
  double b = std::max(lower, upper);
  double x = a + golden * (b - a);
  double w = x, v = x;
  double fx = f(x);
  double fw = fx, fv = fx;
  double d = 0.0, e = 0.0;

  ScalarMinimum result;
  for (int iter = 1; iter <= max_iterations; ++iter) {
    const double mid = 0.5 * (a + b);
    const double tol1 = x_tolerance + tiny * std::abs(x);
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - mid) <= tol2 - 0.5 * (b - a)) {
      result.converged = true;
      result.iterations = iter;
      break;
    }
    bool golden_step = true;
    if (std::abs(e) > tol1) {
      // Parabola through x, w, v.
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double e_prev = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * e_prev) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = mid >= x ? tol1 : -tol1;
        golden_step = false;
      }
    }
    if (golden_step) {
      e = (x >= mid ? a : b) - x;
      d = golden * e;
    }
    const double u = std::abs(d) >= tol1 ? x + d : x + (d > 0.0 ? tol1 : -tol1);
    const double fu = f(u);
    if (fu <= fx) {
      if (u >= x) a = x; else b = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
    result.iterations = iter;
  }
  result.x = x;
  result.value = fx;
  return result;
}

NelderMeadResult nelder_mead_minimize(const std::function<double(const Eigen::VectorXd&)>& f,
                                      const Eigen::VectorXd& start,
                                      const NelderMeadOptions& options) {
  const auto n = static_cast<int>(start.size());
  int evaluations = 0;
  auto eval = [&](const Eigen::VectorXd& x) {
    ++evaluations;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
  };

  std::vector<Eigen::VectorXd> simplex(n + 1, start);
  std::vector<double> values(n + 1);
  for (int i = 0; i < n; ++i) {
    const double step = options.initial_step * std::max(1.0, std::abs(start(i)));
    simplex[i + 1](i) += step;
  }
  for (int i = 0; i <= n; ++i) values[i] = eval(simplex[i]);

  std::vector<int> order(n + 1);
  NelderMeadResult result;
  while (true) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return values[a] < values[b]; });
    const int best = order.front();
    const int worst = order.back();
    const int second_worst = order[n - 1];

    double spread = 0.0;
    for (int i = 0; i <= n; ++i) spread = std::max(spread, (simplex[i] - simplex[best]).lpNorm<Eigen::Infinity>());
    const double f_spread = values[worst] - values[best];
    if (spread <= options.x_tolerance &&
        f_spread <= options.f_tolerance * (1.0 + std::abs(values[best]))) {
      result.converged = true;
      break;
    }
    if (evaluations >= options.max_evaluations) break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i <= n; ++i)
      if (i != worst) centroid += simplex[i];
    centroid /= n;

    const Eigen::VectorXd reflected = centroid + (centroid - simplex[worst]);
    const double f_reflected = eval(reflected);
    if (f_reflected < values[best]) {
      const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - simplex[worst]);
      const double f_expanded = eval(expanded);
      if (f_expanded < f_reflected) {
        simplex[worst] = expanded;
        values[worst] = f_expanded;
      } else {
        simplex[worst] = reflected;
        values[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < values[second_worst]) {
      simplex[worst] = reflected;
      values[worst] = f_reflected;
      continue;
    }
    const bool outside = f_reflected < values[worst];
    const Eigen::VectorXd contracted = outside ? Eigen::VectorXd(centroid + 0.5 * (reflected - centroid))
                                               : Eigen::VectorXd(centroid + 0.5 * (simplex[worst] - centroid));
    const double f_contracted = eval(contracted);
    if (f_contracted < std::min(f_reflected, values[worst])) {
      simplex[worst] = contracted;
      values[worst] = f_contracted;
      continue;
    }
    // Shrink toward the best vertex.
    for (int i = 0; i <= n; ++i) {
      if (i == best) continue;
      simplex[i] = simplex[best] + 0.5 * (simplex[i] - simplex[best]);
      values[i] = eval(simplex[i]);
    }
  }
  const auto best_it = std::min_element(values.begin(), values.end());
  result.x = simplex[static_cast<std::size_t>(best_it - values.begin())];
  result.value = *best_it;
  result.evaluations = evaluations;
  return result;
}

Eigen::MatrixXd numerical_hessian(const std::function<double(const Eigen::VectorXd&)>& f,
                                  const Eigen::VectorXd& x, double relative_step) {
  const auto n = x.size();
  Eigen::VectorXd h(n);
  for (Eigen::Index i = 0; i < n; ++i) h(i) = relative_step * (1.0 + std::abs(x(i)));
  const double f0 = f(x);
  Eigen::MatrixXd hessian(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd xp = x, xm = x;
    xp(i) += h(i);
    xm(i) -= h(i);
    hessian(i, i) = (f(xp) - 2.0 * f0 + f(xm)) / (h(i) * h(i));
    for (Eigen::Index j = 0; j < i; ++j) {
      Eigen::VectorXd pp = x, pm = x, mp = x, mm = x;
      pp(i) += h(i); pp(j) += h(j);
      pm(i) += h(i); pm(j) -= h(j);
      mp(i) -= h(i); mp(j) += h(j);
      mm(i) -= h(i); mm(j) -= h(j);
      hessian(i, j) = hessian(j, i) = (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * h(i) * h(j));
    }
  }
  return hessian;
}

}  // namespace panelprobit
