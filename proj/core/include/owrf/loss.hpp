#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "owrf/criteria.hpp"
#include "owrf/forest.hpp"
#include "owrf/hat_matrix.hpp"
#include "owrf/qp.hpp"

namespace owrf {

/// n x M matrix whose column m is P_m y.
Eigen::MatrixXd fitted_values(const std::vector<HatMatrix>& hats, const Eigen::VectorXd& y);

/// P(w) = sum_m w_m P_m.
HatMatrix::Sparse combined_hat(const std::vector<HatMatrix>& hats, const Eigen::VectorXd& w);

/// L_n(w) = |fits w - mu|^2.
double loss_ln(const Eigen::MatrixXd& fits, const Eigen::VectorXd& w, const Eigen::VectorXd& mu);
double loss_ln(const std::vector<HatMatrix>& hats, const Eigen::VectorXd& y, const Eigen::VectorXd& w,
               const Eigen::VectorXd& mu);

/// Conditional risk E[L_n(w) | X] for y = mu + e, e_j independent with variance sigma2_j:
///   |(P(w) - I) mu|^2 + sum_i sum_j P(w)_ij^2 sigma2_j.
double risk_rn(const std::vector<HatMatrix>& hats, const Eigen::VectorXd& w, const Eigen::VectorXd& mu,
               const Eigen::VectorXd& sigma2);

/// L_n and R_n as w'Gw + b'w on the simplex (b = 0).
QuadraticForm loss_form(const Eigen::MatrixXd& fits, const Eigen::VectorXd& mu);
QuadraticForm risk_form(const std::vector<HatMatrix>& hats, const Eigen::VectorXd& mu,
                        const Eigen::VectorXd& sigma2);

/// inf over the simplex of L_n, by exact QP.
std::pair<WeightVector, double> infeasible_best(const Eigen::MatrixXd& fits, const Eigen::VectorXd& mu);
std::pair<WeightVector, double> infeasible_best(const std::vector<HatMatrix>& hats,
                                                const Eigen::VectorXd& y, const Eigen::VectorXd& mu);

/// Criterion with the true error vector in the penalty (diagnostic only).
double criterion_c_infeasible(const CriterionContext& ctx, const Eigen::VectorXd& w,
                              const Eigen::VectorXd& true_errors);

}  // namespace owrf
