#include "panelprobit/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace panelprobit {
namespace {

QuadratureRule build_legendre(int n) {
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

// Orthonormal (probabilists') Hermite values p_0..p_{n}; p_k = He_k / sqrt(k!).
void hermite_orthonormal(int n, double x, double& pn, double& pn1, double& sum_sq) {
  double prev = 0.0, cur = 1.0;
  sum_sq = 0.0;
  for (int k = 0; k < n; ++k) {
    sum_sq += cur * cur;
    const double next = (x * cur - std::sqrt(static_cast<double>(k)) * prev) / std::sqrt(k + 1.0);
    prev = cur;
    cur = next;
  }
  pn = cur;
  pn1 = prev;
}

QuadratureRule build_hermite(int n) {
  // Golub-Welsch for starting values, then Newton polish on p_n.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    jacobi(k, k - 1) = std::sqrt(static_cast<double>(k));
    jacobi(k - 1, k) = jacobi(k, k - 1);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi, Eigen::EigenvaluesOnly);
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = solver.eigenvalues()(i);
    double pn = 0.0, pn1 = 0.0, sum_sq = 0.0;
    for (int iter = 0; iter < 20; ++iter) {
      hermite_orthonormal(n, x, pn, pn1, sum_sq);
      const double dx = pn / (std::sqrt(static_cast<double>(n)) * pn1);
      x -= dx;
      if (std::abs(dx) < 1e-15 * (1.0 + std::abs(x))) break;
    }
    hermite_orthonormal(n, x, pn, pn1, sum_sq);
    rule.nodes[i] = x;
    rule.weights[i] = 1.0 / sum_sq;
  }
  // Symmetrize to remove round-off asymmetry.
  for (int i = 0; i < n / 2; ++i) {
    const int j = n - 1 - i;
    const double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    rule.weights[i] = rule.weights[j] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  double total = 0.0;
  for (double w : rule.weights) total += w;
  for (double& w : rule.weights) w /= total;
  return rule;
}

template <class Builder>
const QuadratureRule& cached(std::map<int, std::unique_ptr<QuadratureRule>>& cache,
                             std::mutex& mutex, int order, Builder build) {
  if (order < 1 || order > 512) throw std::invalid_argument("quadrature order must be in [1, 512]");
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<QuadratureRule>(build(order));
  return *slot;
}

}  // namespace

const QuadratureRule& gauss_legendre_rule(int order) {
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  static std::mutex mutex;
  return cached(cache, mutex, order, build_legendre);
}

const QuadratureRule& panel_rule() {
  static const QuadratureRule& rule = gauss_legendre_rule(kPanelOrder);
  return rule;
}

const QuadratureRule& gauss_hermite_rule(int order) {
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  static std::mutex mutex;
  return cached(cache, mutex, order, build_hermite);
}

}  // namespace panelprobit
