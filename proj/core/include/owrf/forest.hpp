#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "owrf/bootstrap.hpp"
#include "owrf/dataset.hpp"
#include "owrf/grow.hpp"
#include "owrf/hat_matrix.hpp"
#include "owrf/tree.hpp"

namespace owrf {

/// Point on the probability simplex: w_m >= 0, sum w_m = 1 (within 1e-8).
class WeightVector {
 public:
  explicit WeightVector(Eigen::VectorXd w);

  static WeightVector equal(std::size_t m);

  [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(w_.size()); }
  [[nodiscard]] const Eigen::VectorXd& values() const { return w_; }
  [[nodiscard]] double operator[](std::size_t m) const { return w_(static_cast<Eigen::Index>(m)); }

 private:
  Eigen::VectorXd w_;
};

/// Tree weighting schemes: equal weights, the two Mallows-criterion optimisers,
/// OOB inverse-error weights and rank-based Cesaro weights.
enum class Method { Rf, OneStep, TwoSteps, Wrf, Crf };

std::string to_string(Method method);
Method method_from_string(const std::string& name);

/// Shared, immutable list of per-tree hat matrices.
using HatList = std::shared_ptr<const std::vector<HatMatrix>>;

struct Forest {
  std::vector<RegressionTree> trees;
  std::vector<BootstrapSample> samples;
  HatList hats;  // optional; built on demand
  std::optional<WeightVector> weights;
  Method method = Method::Rf;
  std::size_t features = 0;  // p of the training data; 0 when unknown

  [[nodiscard]] std::size_t size() const { return trees.size(); }
  /// Throws if the parallel lists disagree in length.
  void check() const;
  [[nodiscard]] const WeightVector& weights_or_equal() const;

 private:
  mutable std::optional<WeightVector> equal_cache_;
};

/// Grows `count` trees; tree m uses its own stream seeded with seed + m so the
/// result does not depend on scheduling.
Forest grow_forest(const Dataset& data, const GrowConfig& cfg, std::size_t count,
                   std::uint64_t seed, unsigned threads = 1);

/// Builds and attaches the per-tree hat matrices over the training rows.
void attach_hats(Forest& forest, const Dataset& data, unsigned threads = 1);

/// n x M matrix of per-tree predictions.
Eigen::MatrixXd tree_predictions(const Forest& forest, const Eigen::MatrixXd& x);

/// sum_m w_m * (leaf mean of tree m at each row of x).
Eigen::VectorXd aggregate_predict(const Forest& forest, const Eigen::MatrixXd& x,
                                  const WeightVector& weights);
/// Uses the forest's own weights (equal weights if unset).
Eigen::VectorXd aggregate_predict(const Forest& forest, const Eigen::MatrixXd& x);

}  // namespace owrf
