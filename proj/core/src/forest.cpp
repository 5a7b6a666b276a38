#include "owrf/forest.hpp"

#include <cmath>

#include "owrf/error.hpp"
#include "owrf/parallel.hpp"

namespace owrf {

WeightVector::WeightVector(Eigen::VectorXd w) : w_(std::move(w)) {
  if (w_.size() < 1) throw DimensionError("weight vector is empty");
  if (!w_.allFinite()) throw InputError("weight vector has non-finite entries");
  if (w_.minCoeff() < 0.0) throw InputError("weights must be non-negative");
  if (std::abs(w_.sum() - 1.0) > 1e-8) throw InputError("weights must sum to 1");
}

WeightVector WeightVector::equal(std::size_t m) {
  if (m == 0) throw DimensionError("equal weights over zero trees");
  return WeightVector(Eigen::VectorXd::Constant(static_cast<Eigen::Index>(m), 1.0 / double(m)));
}

std::string to_string(Method method) {
  switch (method) {
    case Method::Rf: return "rf";
    case Method::OneStep: return "1step";
    case Method::TwoSteps: return "2steps";
    case Method::Wrf: return "wrf";
    case Method::Crf: return "crf";
  }
  return "rf";
}

Method method_from_string(const std::string& name) {
  if (name == "rf") return Method::Rf;
  if (name == "1step") return Method::OneStep;
  if (name == "2steps") return Method::TwoSteps;
  if (name == "wrf") return Method::Wrf;
  if (name == "crf") return Method::Crf;
  throw InputError("unknown method '" + name + "' (expected rf, 1step, 2steps, wrf or crf)");
}

void Forest::check() const {
  if (trees.empty()) throw DimensionError("forest has no trees");
  if (samples.size() != trees.size()) throw DimensionError("bootstrap list length != tree count");
  if (hats && hats->size() != trees.size()) throw DimensionError("hat list length != tree count");
  if (weights && weights->size() != trees.size()) throw DimensionError("weight length != tree count");
}

const WeightVector& Forest::weights_or_equal() const {
  if (weights) return *weights;
  if (!equal_cache_ || equal_cache_->size() != trees.size()) equal_cache_ = WeightVector::equal(trees.size());
  return *equal_cache_;
}

Forest grow_forest(const Dataset& data, const GrowConfig& cfg, std::size_t count,
                   std::uint64_t seed, unsigned threads) {
  if (count == 0) throw InputError("forest needs at least one tree");
  cfg.validate(data.cols());
  std::vector<std::optional<RegressionTree>> trees(count);
  std::vector<std::optional<BootstrapSample>> samples(count);
  parallel_for(count, threads, [&](std::size_t m) {
    Rng rng(seed + m);
    samples[m] = bootstrap_sample(data.rows(), rng);
    trees[m] = grow_tree(data, *samples[m], cfg, rng);
  });
  Forest forest;
  forest.features = data.cols();
  forest.trees.reserve(count);
  forest.samples.reserve(count);
  for (std::size_t m = 0; m < count; ++m) {
    forest.trees.push_back(std::move(*trees[m]));
    forest.samples.push_back(std::move(*samples[m]));
  }
  return forest;
}

void attach_hats(Forest& forest, const Dataset& data, unsigned threads) {
  std::vector<std::optional<HatMatrix>> built(forest.size());
  parallel_for(forest.size(), threads,
               [&](std::size_t m) { built[m] = hat_matrix(forest.trees[m], data); });
  auto hats = std::make_shared<std::vector<HatMatrix>>();
  hats->reserve(forest.size());
  for (auto& h : built) hats->push_back(std::move(*h));
  forest.hats = std::move(hats);
}

Eigen::MatrixXd tree_predictions(const Forest& forest, const Eigen::MatrixXd& x) {
  forest.check();
  if (forest.features != 0 && static_cast<std::size_t>(x.cols()) != forest.features) {
    throw DimensionError("prediction matrix column count does not match the forest");
  }
  Eigen::MatrixXd out(x.rows(), static_cast<Eigen::Index>(forest.size()));
  for (std::size_t m = 0; m < forest.size(); ++m) {
    out.col(static_cast<Eigen::Index>(m)) = forest.trees[m].predict(x);
  }
  return out;
}

Eigen::VectorXd aggregate_predict(const Forest& forest, const Eigen::MatrixXd& x,
                                  const WeightVector& weights) {
  forest.check();
  if (weights.size() != forest.size()) throw DimensionError("weight length != tree count");
  if (forest.features != 0 && static_cast<std::size_t>(x.cols()) != forest.features) {
    throw DimensionError("prediction matrix has " + std::to_string(x.cols()) + " columns, forest expects " +
                         std::to_string(forest.features));
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(x.rows());
  for (std::size_t m = 0; m < forest.size(); ++m) {
    out += weights[m] * forest.trees[m].predict(x);
  }
  return out;
}

Eigen::VectorXd aggregate_predict(const Forest& forest, const Eigen::MatrixXd& x) {
  return aggregate_predict(forest, x, forest.weights_or_equal());
}

}  // namespace owrf
