#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "owrf/dataset.hpp"

namespace owrf {

enum class TreeKind { Cart, Sut };

std::string to_string(TreeKind kind);
TreeKind tree_kind_from_string(const std::string& name);

/// A training row inside a leaf together with its bootstrap multiplicity h.
struct LeafMember {
  std::uint32_t index = 0;
  std::uint32_t count = 0;

  friend bool operator==(const LeafMember&, const LeafMember&) = default;
};

/// Flat node record. Internal nodes route x[feature] < cut to `left`, the rest to `right`.
/// Leaves own the slice [member_begin, member_end) of the tree's member array.
struct TreeNode {
  std::int32_t feature = -1;
  double cut = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  std::uint32_t member_begin = 0;
  std::uint32_t member_end = 0;
  double size = 0.0;  // n_l = sum of member multiplicities (leaves only)
  double mean = 0.0;  // bootstrap-weighted mean response (leaves only)
  double impurity_decrease = 0.0;  // parent SSE - children SSE (internal nodes only)

  [[nodiscard]] bool is_leaf() const { return feature < 0; }
};

/// Immutable regression tree. Node 0 is the root.
class RegressionTree {
 public:
  RegressionTree(std::vector<TreeNode> nodes, std::vector<LeafMember> members, TreeKind kind);

  [[nodiscard]] TreeKind kind() const { return kind_; }
  [[nodiscard]] const std::vector<TreeNode>& nodes() const { return nodes_; }
  [[nodiscard]] std::span<const LeafMember> members(const TreeNode& leaf) const;

  /// Node index of the leaf reached by x.
  [[nodiscard]] std::size_t leaf_index(std::span<const double> x) const;
  [[nodiscard]] std::size_t leaf_index(const Eigen::MatrixXd& x, Eigen::Index row) const;

  [[nodiscard]] double predict(std::span<const double> x) const;
  [[nodiscard]] Eigen::VectorXd predict(const Eigen::MatrixXd& x) const;

  [[nodiscard]] std::size_t leaf_count() const;
  [[nodiscard]] double min_leaf_size() const;
  [[nodiscard]] std::size_t depth() const;

  /// Nested canonical form: {feature, cut, left, right} or {members: [[i, h]], mean}.
  [[nodiscard]] nlohmann::json to_json() const;
  static RegressionTree from_json(const nlohmann::json& j, TreeKind kind);

 private:
  std::vector<TreeNode> nodes_;
  std::vector<LeafMember> members_;
  TreeKind kind_;
};

/// Builds leaf nodes from member lists; helper for trees assembled by hand.
class TreeBuilder {
 public:
  explicit TreeBuilder(const Eigen::VectorXd& y) : y_(&y) {}

  /// Returns the node index of a new leaf with the given members.
  std::int32_t leaf(const std::vector<LeafMember>& members);
  /// Returns the node index of a new split node; children must already exist.
  std::int32_t split(std::int32_t feature, double cut, std::int32_t left, std::int32_t right,
                     double impurity_decrease = 0.0);

  /// The last node created is taken as the root and moved to index 0.
  RegressionTree build(TreeKind kind) &&;

 private:
  const Eigen::VectorXd* y_;
  std::vector<TreeNode> nodes_;
  std::vector<LeafMember> members_;
};

}  // namespace owrf
