#pragma once

#include <cstddef>
#include <string>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "owrf/forest.hpp"

namespace owrf {

/// Outcome of one weight optimisation.
struct SolveReport {
  WeightVector w;
  double objective = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  double wall_time = 0.0;  // seconds
  std::string method;

  [[nodiscard]] nlohmann::json to_json() const;
};

struct QpOptions {
  /// Problems up to this many weights use the active-set method.
  std::size_t active_set_limit = 200;
  /// Relative Tikhonov term added inside the active-set linear algebra only.
  double ridge = 1e-12;
  /// Relative Frank-Wolfe gap required to flag convergence.
  double tolerance = 1e-9;
  std::size_t max_gradient_iterations = 20000;
};

/// f(w) = w'Gw + b'w.
double quadratic_objective(const Eigen::MatrixXd& g, const Eigen::VectorXd& b,
                           const Eigen::VectorXd& w);

/// Global minimiser of w'Gw + b'w over the simplex for symmetric PSD G.
/// Throws InputError on non-finite input, asymmetry or a negative eigenvalue
/// below -1e-8 * max(1, lambda_max).
SolveReport solve_quadratic_simplex(const Eigen::MatrixXd& g, const Eigen::VectorXd& b,
                                    const QpOptions& options = {});

}  // namespace owrf
