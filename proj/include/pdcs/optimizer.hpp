#pragma once

#include <functional>
#include <vector>

namespace pdcs {

struct OptimizerTolerances {
  double gradient_norm = 1e-9;  ///< stop when the max-abs gradient falls below this
  int max_iterations = 2000;
};

/// Value to maximize; fills grad (same size as x) with its gradient.
using SmoothObjective = std::function<double(const std::vector<double>& x, std::vector<double>& grad)>;

struct OptimizerResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;  ///< gradient tolerance reached (not merely stalled)
};

/**
 * BFGS maximization with an Armijo backtracking line search.
 *
 * The inverse-Hessian approximation is rescaled after the first accepted step
 * and reset whenever the search direction stops being an ascent direction.
 * Steps are capped at max_step in the max-norm. When given, project() is
 * applied to every accepted iterate (e.g. angle wrapping); the objective must
 * be invariant under it.
 */
OptimizerResult maximize_bfgs(const SmoothObjective& objective, std::vector<double> x0,
                              const OptimizerTolerances& tol,
                              const std::function<void(std::vector<double>&)>& project = {},
                              double max_step = 0.5);

}  // namespace pdcs
