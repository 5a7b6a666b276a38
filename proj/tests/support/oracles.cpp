#include "oracles.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "owrf/grow.hpp"

namespace oracle {

owrf::Dataset toy_data(std::size_t n, std::size_t p, std::uint64_t seed, double noise) {
  std::mt19937_64 rng(seed * 7919 + 17);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, noise);
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  Eigen::VectorXd y(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    double mu = 0.0;
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      x(i, j) = unif(rng);
      mu += double(j + 1) * x(i, j);
    }
    y(i) = mu + gauss(rng);
  }
  return owrf::Dataset(std::move(x), std::move(y));
}

owrf::Forest toy_forest(const owrf::Dataset& data, std::size_t trees, owrf::TreeKind kind,
                        std::uint64_t seed, std::size_t min_node) {
  owrf::GrowConfig cfg;
  cfg.kind = kind;
  cfg.q = owrf::default_q(data.cols());
  cfg.min_node = min_node;
  if (kind == owrf::TreeKind::Sut) {
    cfg.prob_seq = std::vector<double>(data.cols(), 1.0 / double(data.cols()));
  }
  owrf::Forest forest = owrf::grow_forest(data, cfg, trees, seed);
  owrf::attach_hats(forest, data);
  return forest;
}

Eigen::MatrixXd dense_hat(const owrf::RegressionTree& tree, const owrf::BootstrapSample& sample,
                          const owrf::Dataset& data) {
  const auto n = static_cast<Eigen::Index>(data.rows());
  std::vector<std::size_t> leaf(data.rows());
  for (Eigen::Index i = 0; i < n; ++i) leaf[static_cast<std::size_t>(i)] = tree.leaf_index(data.x(), i);
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double total = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      if (leaf[static_cast<std::size_t>(k)] == leaf[static_cast<std::size_t>(i)]) {
        total += sample.count(static_cast<std::size_t>(k));
      }
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      if (leaf[static_cast<std::size_t>(j)] == leaf[static_cast<std::size_t>(i)]) {
        p(i, j) = sample.count(static_cast<std::size_t>(j)) / total;
      }
    }
  }
  return p;
}

namespace {

void enumerate(std::size_t m, std::size_t pos, int remaining, double step, Eigen::VectorXd& w,
               const std::function<double(const Eigen::VectorXd&)>& f, std::pair<Eigen::VectorXd, double>& best) {
  if (pos + 1 == m) {
    w(static_cast<Eigen::Index>(pos)) = remaining * step;
    const double v = f(w);
    if (v < best.second) best = {w, v};
    return;
  }
  for (int k = 0; k <= remaining; ++k) {
    w(static_cast<Eigen::Index>(pos)) = k * step;
    enumerate(m, pos + 1, remaining - k, step, w, f, best);
  }
}

}  // namespace

std::pair<Eigen::VectorXd, double> grid_minimum(std::size_t m, double step,
                                                const std::function<double(const Eigen::VectorXd&)>& f) {
  const int units = static_cast<int>(std::lround(1.0 / step));
  Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  std::pair<Eigen::VectorXd, double> best{w, std::numeric_limits<double>::infinity()};
  enumerate(m, 0, units, 1.0 / units, w, f, best);
  return best;
}

Eigen::VectorXd central_difference(const std::function<double(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& w, double h) {
  Eigen::VectorXd g(w.size());
  for (Eigen::Index m = 0; m < w.size(); ++m) {
    Eigen::VectorXd up = w;
    Eigen::VectorXd down = w;
    up(m) += h;
    down(m) -= h;
    g(m) = (f(up) - f(down)) / (2.0 * h);
  }
  return g;
}

Eigen::VectorXd random_simplex_point(std::size_t m, std::mt19937_64& rng) {
  std::exponential_distribution<double> expo(1.0);
  Eigen::VectorXd w(static_cast<Eigen::Index>(m));
  for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = expo(rng);
  return w / w.sum();
}

double c_prime_dense(const Eigen::VectorXd& y, const std::vector<Eigen::MatrixXd>& hats,
                     const Eigen::VectorXd& w) {
  const Eigen::Index n = y.size();
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t m = 0; m < hats.size(); ++m) p += w(static_cast<Eigen::Index>(m)) * hats[m];
  const Eigen::VectorXd e = y - p * y;
  double value = e.squaredNorm();
  for (Eigen::Index i = 0; i < n; ++i) value += 2.0 * e(i) * e(i) * p(i, i);
  return value;
}

std::vector<Eigen::MatrixXd> dense_hats(const owrf::Forest& forest, const owrf::Dataset& data) {
  std::vector<Eigen::MatrixXd> out;
  for (std::size_t m = 0; m < forest.size(); ++m) out.push_back(dense_hat(forest.trees[m], forest.samples[m], data));
  return out;
}

}  // namespace oracle
