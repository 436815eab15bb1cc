#pragma once

#include <functional>

#include <Eigen/Dense>

namespace panelprobit {

struct ScalarMinimum {
  double x = 0.0;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Brent's method (golden section with parabolic steps) on [lower, upper].
/// Stops when the bracket around the minimizer is narrower than 2*x_tolerance.
ScalarMinimum brent_minimize(const std::function<double(double)>& f, double lower, double upper,
                             double x_tolerance = 1e-8, int max_iterations = 500);

struct NelderMeadOptions {
  double x_tolerance = 1e-8;  // largest vertex distance from the best vertex (max-norm)
  double f_tolerance = 1e-12; // spread of function values, relative to 1 + |f_best|
  int max_evaluations = 20000;
  double initial_step = 0.5;
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Downhill simplex minimization. Non-finite objective values are treated as +inf.
NelderMeadResult nelder_mead_minimize(const std::function<double(const Eigen::VectorXd&)>& f,
                                      const Eigen::VectorXd& start,
                                      const NelderMeadOptions& options = {});

/// Central-difference Hessian with per-coordinate step relative_step * (1 + |x_i|).
Eigen::MatrixXd numerical_hessian(const std::function<double(const Eigen::VectorXd&)>& f,
                                  const Eigen::VectorXd& x, double relative_step = 1e-4);

}  // namespace panelprobit
