#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "owrf/dataset.hpp"
#include "owrf/forest.hpp"

namespace owrf {

/// Everything the Mallows-type criteria need, precomputed once per forest.
///
/// Column m of `residuals` is y - P_m y and column m of `diagonals` holds the hat
/// diagonal of tree m, so that for a weight vector w
///   r(w) = residuals * w,   d(w) = diagonals * w.
/// `gram` caches residuals' * residuals for the quadratic criteria.
struct CriterionContext {
  Eigen::VectorXd y;
  HatList hats;  // null when built from leaf means directly
  Eigen::MatrixXd residuals;
  Eigen::MatrixXd diagonals;
  Eigen::VectorXd traces;
  Eigen::MatrixXd gram;

  [[nodiscard]] std::size_t trees() const { return static_cast<std::size_t>(residuals.cols()); }
  [[nodiscard]] std::size_t rows() const { return static_cast<std::size_t>(residuals.rows()); }

  static CriterionContext from_hats(const Eigen::VectorXd& y, HatList hats);
  /// Uses the forest's attached hats when present, otherwise leaf means and
  /// hat diagonals computed straight from the trees (same values, no n x n storage).
  static CriterionContext from_forest(const Forest& forest, const Dataset& train);
  /// From explicit n x M residual and diagonal matrices.
  static CriterionContext from_parts(Eigen::VectorXd y, Eigen::MatrixXd residuals,
                                     Eigen::MatrixXd diagonals);
};

/// C'(w) = |r(w)|^2 + 2 sum_i r_i(w)^2 d_i(w); cubic in w.
double criterion_c_prime(const CriterionContext& ctx, const Eigen::VectorXd& w);
/// Analytic gradient: 2E'r + 4E'(r.d) + 2D'(r.r).
Eigen::VectorXd criterion_c_prime_gradient(const CriterionContext& ctx, const Eigen::VectorXd& w);

/// C0(w) = |r(w)|^2 + 2 sigma2 sum_m w_m trace(P_m).
double criterion_c_zero(const CriterionContext& ctx, const Eigen::VectorXd& w, double sigma2);
/// C''(w) = |r(w)|^2 + 2 sum_i e_i^2 d_i(w) for a fixed residual estimate e.
double criterion_c_dprime(const CriterionContext& ctx, const Eigen::VectorXd& w,
                          const Eigen::VectorXd& e_tilde);

/// |y - P(w0) y|^2 / n at equal weights w0.
double sigma2_equal_weights(const CriterionContext& ctx);

/// C0 and C'' written as w'Gw + b'w.
struct QuadraticForm {
  Eigen::MatrixXd g;
  Eigen::VectorXd b;
};
QuadraticForm c_zero_form(const CriterionContext& ctx, double sigma2);
QuadraticForm c_dprime_form(const CriterionContext& ctx, const Eigen::VectorXd& e_tilde);

}  // namespace owrf
