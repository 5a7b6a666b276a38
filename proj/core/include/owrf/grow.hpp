#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "owrf/bootstrap.hpp"
#include "owrf/dataset.hpp"
#include "owrf/random.hpp"
#include "owrf/tree.hpp"

namespace owrf {

/// Tree growth parameters.
///   q        features considered per split, 1 <= q <= p
///   min_node nodes whose bootstrap size is below this become leaves
///   prob_seq SUT feature-selection probabilities (length p, sums to 1)
struct GrowConfig {
  std::size_t q = 1;
  std::size_t min_node = 5;
  TreeKind kind = TreeKind::Cart;
  std::optional<std::vector<double>> prob_seq;

  /// Throws InputError if the config is inconsistent with p.
  void validate(std::size_t p) const;
};

/// ceil(p / 3), at least 1.
std::size_t default_q(std::size_t p);
/// round(sqrt(n)) for CART, 5 for SUT.
std::size_t default_min_node(TreeKind kind, std::size_t n);

struct SplitCandidate {
  std::size_t feature = 0;
  double cut = 0.0;
  double score = 0.0;  // children SSE for CART, Score(s, S) for SUT
};

RegressionTree grow_cart(const Dataset& data, const BootstrapSample& sample, const GrowConfig& cfg,
                         Rng& rng);
RegressionTree grow_sut(const Dataset& data, const BootstrapSample& sample, const GrowConfig& cfg,
                        Rng& rng);
/// Dispatches on cfg.kind.
RegressionTree grow_tree(const Dataset& data, const BootstrapSample& sample, const GrowConfig& cfg,
                         Rng& rng);

/// Frobenius norm of a copy of `rows` whose columns are centered and divided by their
/// sample standard deviation (row weights act as multiplicities). Constant columns,
/// and all columns of a single-row matrix, contribute zero.
double scaled_frobenius_norm(const Eigen::MatrixXd& rows, const Eigen::VectorXd& weights);

/// Unsupervised split score
///   (|P| - nL/nP |L| - nR/nP |R|) / |P|
/// over centered-and-scaled attribute matrices. Empty child gives -inf; |P| = 0 gives 0.
double sut_score(const Eigen::MatrixXd& parent, const Eigen::MatrixXd& left,
                 const Eigen::MatrixXd& right);
double sut_score(const Eigen::MatrixXd& parent, const Eigen::VectorXd& parent_weights,
                 const Eigen::MatrixXd& left, const Eigen::VectorXd& left_weights,
                 const Eigen::MatrixXd& right, const Eigen::VectorXd& right_weights);

}  // namespace owrf
