#pragma once

#include <Eigen/Core>
#include <functional>

namespace svine {

struct SimplexOptions {
  int max_iter = 5000;        // objective evaluations
  double f_tol = 1e-10;       // simplex value spread
  double x_tol = 1e-9;        // simplex vertex spread (max-norm)
  double initial_step = 0.25; // per-coordinate offset of the start simplex
};

struct SimplexResult {
  Eigen::VectorXd x;
  double f = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Derivative-free Nelder-Mead minimization with standard coefficients
/// (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
SimplexResult minimize_simplex(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x0, const SimplexOptions& opts = {});

}  // namespace svine
