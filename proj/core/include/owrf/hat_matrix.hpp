#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "owrf/bootstrap.hpp"
#include "owrf/dataset.hpp"
#include "owrf/tree.hpp"

namespace owrf {

/// Row-sparse n x n linear smoother of one tree over its training rows:
/// entry (i, j) = h_j / n_l when row j is a member of the leaf reached by x_i.
/// Rows are stochastic; the diagonal is cached.
class HatMatrix {
 public:
  using Sparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;

  explicit HatMatrix(Sparse matrix);

  [[nodiscard]] Eigen::Index size() const { return matrix_.rows(); }
  [[nodiscard]] const Sparse& matrix() const { return matrix_; }
  [[nodiscard]] const Eigen::VectorXd& diag() const { return diag_; }

  /// P y.
  [[nodiscard]] Eigen::VectorXd apply(const Eigen::VectorXd& y) const;
  [[nodiscard]] Eigen::MatrixXd dense() const { return Eigen::MatrixXd(matrix_); }

 private:
  Sparse matrix_;
  Eigen::VectorXd diag_;
};

HatMatrix hat_matrix(const RegressionTree& tree, const Dataset& data);

/// Diagonal h_i / n_l(x_i) without materialising the matrix (0 for out-of-bag rows).
Eigen::VectorXd hat_diagonal(const RegressionTree& tree, const Dataset& data);

}  // namespace owrf
