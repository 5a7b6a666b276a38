#include "owrf/tree.hpp"

#include <algorithm>
#include <functional>
#include <limits>

#include "owrf/error.hpp"

namespace owrf {

std::string to_string(TreeKind kind) { return kind == TreeKind::Cart ? "cart" : "sut"; }

TreeKind tree_kind_from_string(const std::string& name) {
  if (name == "cart" || name == "CART") return TreeKind::Cart;
  if (name == "sut" || name == "SUT") return TreeKind::Sut;
  throw InputError("unknown tree kind '" + name + "' (expected cart or sut)");
}

RegressionTree::RegressionTree(std::vector<TreeNode> nodes, std::vector<LeafMember> members,
                               TreeKind kind)
    : nodes_(std::move(nodes)), members_(std::move(members)), kind_(kind) {
  if (nodes_.empty()) throw InputError("tree has no nodes");
  const auto n = static_cast<std::int32_t>(nodes_.size());
  for (const TreeNode& node : nodes_) {
    if (node.is_leaf()) {
      if (node.member_end <= node.member_begin || node.member_end > members_.size()) {
        throw InputError("leaf with empty or out-of-range member list");
      }
      if (!(node.size >= 1.0)) throw InputError("leaf with n_l < 1");
    } else if (node.left <= 0 || node.right <= 0 || node.left >= n || node.right >= n) {
      throw InputError("split node with invalid child index");
    }
  }
}

std::span<const LeafMember> RegressionTree::members(const TreeNode& leaf) const {
  return {members_.data() + leaf.member_begin, leaf.member_end - leaf.member_begin};
}

std::size_t RegressionTree::leaf_index(std::span<const double> x) const {
  std::size_t at = 0;
  while (!nodes_[at].is_leaf()) {
    const TreeNode& node = nodes_[at];
    at = static_cast<std::size_t>(x[static_cast<std::size_t>(node.feature)] < node.cut ? node.left
                                                                                      : node.right);
  }
  return at;
}

std::size_t RegressionTree::leaf_index(const Eigen::MatrixXd& x, Eigen::Index row) const {
  std::size_t at = 0;
  while (!nodes_[at].is_leaf()) {
    const TreeNode& node = nodes_[at];
    at = static_cast<std::size_t>(x(row, node.feature) < node.cut ? node.left : node.right);
  }
  return at;
}

double RegressionTree::predict(std::span<const double> x) const {
  return nodes_[leaf_index(x)].mean;
}

Eigen::VectorXd RegressionTree::predict(const Eigen::MatrixXd& x) const {
  Eigen::VectorXd out(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) out(i) = nodes_[leaf_index(x, i)].mean;
  return out;
}

std::size_t RegressionTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

double RegressionTree::min_leaf_size() const {
  double smallest = std::numeric_limits<double>::infinity();
  for (const TreeNode& n : nodes_) {
    if (n.is_leaf()) smallest = std::min(smallest, n.size);
  }
  return smallest;
}

std::size_t RegressionTree::depth() const {
  std::function<std::size_t(std::size_t)> walk = [&](std::size_t at) -> std::size_t {
    const TreeNode& n = nodes_[at];
    if (n.is_leaf()) return 0;
    return 1 + std::max(walk(static_cast<std::size_t>(n.left)),
                        walk(static_cast<std::size_t>(n.right)));
  };
  return walk(0);
}

nlohmann::json RegressionTree::to_json() const {
  std::function<nlohmann::json(std::size_t)> emit = [&](std::size_t at) {
    const TreeNode& n = nodes_[at];
    nlohmann::json j;
    if (n.is_leaf()) {
      nlohmann::json members = nlohmann::json::array();
      for (const LeafMember& m : this->members(n)) members.push_back({m.index, m.count});
      j["members"] = std::move(members);
      j["mean"] = n.mean;
    } else {
      j["feature"] = n.feature;
      j["cut"] = n.cut;
      j["left"] = emit(static_cast<std::size_t>(n.left));
      j["right"] = emit(static_cast<std::size_t>(n.right));
    }
    return j;
  };
  return emit(0);
}

RegressionTree RegressionTree::from_json(const nlohmann::json& j, TreeKind kind) {
  std::vector<TreeNode> nodes;
  std::vector<LeafMember> members;
  // Pre-order: reserve the slot, then fill children.
  std::function<std::int32_t(const nlohmann::json&)> read = [&](const nlohmann::json& node) {
    const auto at = static_cast<std::int32_t>(nodes.size());
    nodes.emplace_back();
    TreeNode parsed;
    if (node.contains("members")) {
      parsed.member_begin = static_cast<std::uint32_t>(members.size());
      double size = 0.0;
      for (const auto& pair : node.at("members")) {
        LeafMember m{pair.at(0).get<std::uint32_t>(), pair.at(1).get<std::uint32_t>()};
        size += m.count;
        members.push_back(m);
      }
      parsed.member_end = static_cast<std::uint32_t>(members.size());
      parsed.size = size;
      parsed.mean = node.at("mean").get<double>();
    } else {
      parsed.feature = node.at("feature").get<std::int32_t>();
      parsed.cut = node.at("cut").get<double>();
      parsed.left = read(node.at("left"));
      parsed.right = read(node.at("right"));
    }
    nodes[static_cast<std::size_t>(at)] = parsed;
    return at;
  };
  read(j);
  return RegressionTree(std::move(nodes), std::move(members), kind);
}

std::int32_t TreeBuilder::leaf(const std::vector<LeafMember>& members) {
  TreeNode node;
  node.member_begin = static_cast<std::uint32_t>(members_.size());
  double size = 0.0;
  double weighted = 0.0;
  for (const LeafMember& m : members) {
    if (m.index >= static_cast<std::uint32_t>(y_->size())) {
      throw DimensionError("leaf member index out of range");
    }
    size += m.count;
    weighted += m.count * (*y_)(m.index);
    members_.push_back(m);
  }
  node.member_end = static_cast<std::uint32_t>(members_.size());
  node.size = size;
  node.mean = size > 0.0 ? weighted / size : 0.0;
  nodes_.push_back(node);
  return static_cast<std::int32_t>(nodes_.size() - 1);
}

std::int32_t TreeBuilder::split(std::int32_t feature, double cut, std::int32_t left,
                                std::int32_t right, double impurity_decrease) {
  TreeNode node;
  node.feature = feature;
  node.cut = cut;
  node.left = left;
  node.right = right;
  node.impurity_decrease = impurity_decrease;
  nodes_.push_back(node);
  return static_cast<std::int32_t>(nodes_.size() - 1);
}

RegressionTree TreeBuilder::build(TreeKind kind) && {
  if (nodes_.empty()) throw InputError("empty tree");
  // Swap the root into slot 0 and patch child references.
  const auto root = static_cast<std::int32_t>(nodes_.size() - 1);
  if (root != 0) {
    std::swap(nodes_[0], nodes_[static_cast<std::size_t>(root)]);
    for (TreeNode& n : nodes_) {
      if (n.is_leaf()) continue;
      for (std::int32_t* child : {&n.left, &n.right}) {
        if (*child == 0) *child = root;
        else if (*child == root) *child = 0;
      }
    }
  }
  return RegressionTree(std::move(nodes_), std::move(members_), kind);
}

}  // namespace owrf
