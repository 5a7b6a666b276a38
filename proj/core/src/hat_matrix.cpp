#include "owrf/hat_matrix.hpp"

#include <vector>

#include "owrf/error.hpp"

namespace owrf {

HatMatrix::HatMatrix(Sparse matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols()) throw DimensionError("hat matrix must be square");
  matrix_.makeCompressed();
  diag_ = matrix_.diagonal();
}

Eigen::VectorXd HatMatrix::apply(const Eigen::VectorXd& y) const {
  if (y.size() != matrix_.cols()) throw DimensionError("hat matrix / vector size mismatch");
  return matrix_ * y;
}

HatMatrix hat_matrix(const RegressionTree& tree, const Dataset& data) {
  const auto n = static_cast<Eigen::Index>(data.rows());
  std::vector<std::size_t> leaf_of(data.rows());
  Eigen::VectorXi per_row(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    leaf_of[static_cast<std::size_t>(i)] = tree.leaf_index(data.x(), i);
    const TreeNode& leaf = tree.nodes()[leaf_of[static_cast<std::size_t>(i)]];
    per_row(i) = static_cast<int>(leaf.member_end - leaf.member_begin);
  }
  HatMatrix::Sparse p(n, n);
  p.reserve(per_row);
  for (Eigen::Index i = 0; i < n; ++i) {
    const TreeNode& leaf = tree.nodes()[leaf_of[static_cast<std::size_t>(i)]];
    for (const LeafMember& m : tree.members(leaf)) {
      if (m.index >= data.rows()) throw DimensionError("tree member outside dataset");
      p.insert(i, static_cast<Eigen::Index>(m.index)) = double(m.count) / leaf.size;
    }
  }
  return HatMatrix(std::move(p));
}

Eigen::VectorXd hat_diagonal(const RegressionTree& tree, const Dataset& data) {
  const auto n = static_cast<Eigen::Index>(data.rows());
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  for (const TreeNode& node : tree.nodes()) {
    if (!node.is_leaf()) continue;
    for (const LeafMember& m : tree.members(node)) {
      // Only rows that route back into their own leaf contribute a diagonal entry.
      if (tree.leaf_index(data.x(), m.index) == static_cast<std::size_t>(&node - tree.nodes().data())) {
        diag(m.index) = double(m.count) / node.size;
      }
    }
  }
  return diag;
}

}  // namespace owrf
