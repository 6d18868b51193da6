#include "pdcs/optimizer.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace pdcs {

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kMinStep = 1e-14;

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

OptimizerResult maximize_bfgs(const SmoothObjective& objective, std::vector<double> x0,
                              const OptimizerTolerances& tol,
                              const std::function<void(std::vector<double>&)>& project,
                              double max_step) {
  const auto dim = static_cast<Eigen::Index>(x0.size());
  OptimizerResult result;
  if (project) project(x0);
  std::vector<double> grad_buf(x0.size(), 0.0);
  // Internally minimize f = -objective.
  double f = -objective(x0, grad_buf);
  Eigen::VectorXd g = -to_eigen(grad_buf);
  Eigen::VectorXd x = to_eigen(x0);
  result.x = x0;
  result.value = -f;
  if (dim == 0) {
    result.converged = true;
    return result;
  }

  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(dim, dim);
  bool scaled = false;
  std::vector<double> trial(x0.size());
  for (int it = 0; it < tol.max_iterations; ++it) {
    result.iterations = it;
    if (g.lpNorm<Eigen::Infinity>() < tol.gradient_norm) {
      result.converged = true;
      break;
    }
    Eigen::VectorXd p = -h * g;
    if (g.dot(p) >= 0.0) {
      h.setIdentity();
      scaled = false;
      p = -g;
    }
    const double longest = p.lpNorm<Eigen::Infinity>();
    if (longest > max_step) p *= max_step / longest;

    const double slope = g.dot(p);
    double alpha = 1.0;
    double f_new = 0.0;
    Eigen::VectorXd x_new;
    bool accepted = false;
    while (alpha * p.lpNorm<Eigen::Infinity>() > kMinStep) {
      x_new = x + alpha * p;
      trial = to_std(x_new);
      f_new = -objective(trial, grad_buf);
      if (std::isfinite(f_new) && f_new <= f + kArmijo * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;  // stalled: no decrease representable along p

    const Eigen::VectorXd g_new = -to_eigen(grad_buf);
    const Eigen::VectorXd s = x_new - x;
    const Eigen::VectorXd y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-16 * s.norm() * y.norm() && sy > 0.0) {
      if (!scaled) {
        h = Eigen::MatrixXd::Identity(dim, dim) * (sy / y.squaredNorm());
        scaled = true;
      }
      const double rho = 1.0 / sy;
      const Eigen::VectorXd hy = h * y;
      h += rho * rho * (sy + y.dot(hy)) * (s * s.transpose()) -
           rho * (hy * s.transpose() + s * hy.transpose());
    }

    if (project) {
      project(trial);
      x_new = to_eigen(trial);
    }
    x = x_new;
    f = f_new;
    g = g_new;
    result.iterations = it + 1;
  }
  result.x = to_std(x);
  result.value = -f;
  if (g.lpNorm<Eigen::Infinity>() < tol.gradient_norm) result.converged = true;
  return result;
}

}  // namespace pdcs
