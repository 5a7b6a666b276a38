#include "owrf/oob_weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "owrf/error.hpp"

namespace owrf {

std::optional<double> tpe_star(std::size_t tree_index, const Forest& forest, const Dataset& train) {
  forest.check();
  if (tree_index >= forest.size()) throw DimensionError("tree index out of range");
  const BootstrapSample& sample = forest.samples[tree_index];
  if (sample.size() != train.rows()) throw DimensionError("bootstrap size != training rows");
  const RegressionTree& tree = forest.trees[tree_index];
  double total = 0.0;
  std::size_t oob = 0;
  for (std::size_t i = 0; i < train.rows(); ++i) {
    if (!sample.out_of_bag(i)) continue;
    total += std::abs(tree.nodes()[tree.leaf_index(train.x(), static_cast<Eigen::Index>(i))].mean - train.y(i));
    ++oob;
  }
  if (oob == 0) return std::nullopt;
  return total / double(oob);
}

std::vector<std::optional<double>> tpe_stars(const Forest& forest, const Dataset& train) {
  std::vector<std::optional<double>> out;
  out.reserve(forest.size());
  for (std::size_t m = 0; m < forest.size(); ++m) out.push_back(tpe_star(m, forest, train));
  return out;
}

namespace {

std::vector<double> fill_missing(const std::vector<std::optional<double>>& errors) {
  if (errors.empty()) throw DimensionError("no tree errors");
  double total = 0.0;
  std::size_t known = 0;
  for (const auto& e : errors) {
    if (!e) continue;
    if (!std::isfinite(*e) || *e < 0.0) throw InputError("tree errors must be finite and >= 0");
    total += *e;
    ++known;
  }
  const double fallback = known > 0 ? total / double(known) : 1.0;
  std::vector<double> out;
  out.reserve(errors.size());
  for (const auto& e : errors) out.push_back(e ? *e : fallback);
  return out;
}

Eigen::VectorXd uniform(std::size_t m) {
  return Eigen::VectorXd::Constant(static_cast<Eigen::Index>(m), 1.0 / double(m));
}

// Normalised exp(log_w) computed with the max subtracted.
Eigen::VectorXd softmax(const std::vector<double>& log_w) {
  const double top = *std::max_element(log_w.begin(), log_w.end());
  Eigen::VectorXd w(static_cast<Eigen::Index>(log_w.size()));
  for (std::size_t m = 0; m < log_w.size(); ++m) w(static_cast<Eigen::Index>(m)) = std::exp(log_w[m] - top);
  return w / w.sum();
}

}  // namespace

WeightVector wrf_weights_from_errors(const std::vector<std::optional<double>>& errors, double lambda,
                                     WrfForm form) {
  const std::vector<double> tpe = fill_missing(errors);
  const std::size_t m = tpe.size();

  if (form == WrfForm::OneMinus) {
    Eigen::VectorXd w(static_cast<Eigen::Index>(m));
    for (std::size_t k = 0; k < m; ++k) w(static_cast<Eigen::Index>(k)) = std::max(0.0, 1.0 - tpe[k]);
    if (!(w.sum() > 0.0)) return WeightVector(uniform(m));
    return WeightVector(w / w.sum());
  }

  if (form == WrfForm::InversePower && !(lambda > 0.0)) {
    if (lambda == 0.0) return WeightVector(uniform(m));
    throw InputError("wRF exponent must be >= 0");
  }

  const std::size_t zeros = static_cast<std::size_t>(std::count(tpe.begin(), tpe.end(), 0.0));
  if (zeros > 0) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
    for (std::size_t k = 0; k < m; ++k) {
      if (tpe[k] == 0.0) w(static_cast<Eigen::Index>(k)) = 1.0 / double(zeros);
    }
    return WeightVector(w);
  }

  std::vector<double> log_w(m);
  for (std::size_t k = 0; k < m; ++k) {
    log_w[k] = form == WrfForm::Exponential ? 1.0 / tpe[k] : -lambda * std::log(tpe[k]);
  }
  return WeightVector(softmax(log_w));
}

WeightVector wrf_weights(const Forest& forest, const Dataset& train, double lambda, WrfForm form) {
  return wrf_weights_from_errors(tpe_stars(forest, train), lambda, form);
}

std::vector<std::size_t> error_ranks(const std::vector<std::optional<double>>& errors) {
  const std::vector<double> tpe = fill_missing(errors);
  std::vector<std::size_t> order(tpe.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return tpe[a] < tpe[b]; });
  std::vector<std::size_t> rank(tpe.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r + 1;
  return rank;
}

std::vector<Rational> cesaro_weights_exact(std::size_t m) {
  if (m == 0) throw DimensionError("Cesaro weights over zero trees");
  if (m > 30) throw DomainError("exact Cesaro weights are limited to M <= 30");
  std::vector<Rational> by_rank(m);
  Rational tail(0);
  for (std::size_t r = m; r >= 1; --r) {
    tail += Rational(1, static_cast<std::int64_t>(r));
    by_rank[r - 1] = tail;
  }
  // sum_r sum_{k>=r} 1/k = sum_k k * (1/k) = M.
  for (Rational& w : by_rank) w /= static_cast<std::int64_t>(m);
  return by_rank;
}

WeightVector crf_weights_from_errors(const std::vector<std::optional<double>>& errors) {
  const std::vector<std::size_t> rank = error_ranks(errors);
  const std::size_t m = rank.size();
  std::vector<double> by_rank(m);
  if (m <= 30) {
    const std::vector<Rational> exact = cesaro_weights_exact(m);
    for (std::size_t r = 0; r < m; ++r) by_rank[r] = boost::rational_cast<double>(exact[r]);
  } else {
    double tail = 0.0;
    for (std::size_t r = m; r >= 1; --r) {
      tail += 1.0 / double(r);
      by_rank[r - 1] = tail;
    }
    const double total = std::accumulate(by_rank.begin(), by_rank.end(), 0.0);
    for (double& w : by_rank) w /= total;
  }
  Eigen::VectorXd w(static_cast<Eigen::Index>(m));
  for (std::size_t k = 0; k < m; ++k) w(static_cast<Eigen::Index>(k)) = by_rank[rank[k] - 1];
  return WeightVector(w);
}

WeightVector crf_weights(const Forest& forest, const Dataset& train) {
  return crf_weights_from_errors(tpe_stars(forest, train));
}

}  // namespace owrf
