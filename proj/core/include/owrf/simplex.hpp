#pragma once

#include <Eigen/Dense>

namespace owrf {

/// Euclidean projection onto {w >= 0, sum w = 1} by sort-and-threshold.
Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v);

/// Clamps entries below `floor` (including tiny negatives) to 0 and renormalises.
Eigen::VectorXd snap_to_simplex(const Eigen::VectorXd& w, double floor = 1e-12);

/// Frank-Wolfe gap g.w - min_i g_i. Non-negative on the simplex and zero exactly at
/// first-order stationary points; for convex objectives it bounds f(w) - min f.
double frank_wolfe_gap(const Eigen::VectorXd& w, const Eigen::VectorXd& gradient);

/// All coordinates >= -tol and |sum - 1| <= tol.
bool in_simplex(const Eigen::VectorXd& w, double tol = 1e-8);

}  // namespace owrf
