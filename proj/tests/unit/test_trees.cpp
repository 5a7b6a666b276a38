#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "oracles.hpp"
#include "owrf/bootstrap.hpp"
#include "owrf/error.hpp"
#include "owrf/grow.hpp"
#include "owrf/hat_matrix.hpp"
#include "owrf/importance.hpp"

using namespace owrf;

namespace {

Dataset four_points() {
  Eigen::MatrixXd x(4, 1);
  x << 1, 2, 3, 4;
  return Dataset(x, Eigen::Vector4d(0, 0, 10, 10));
}

// In-bag rows (with multiplicity) that reach each node, found by routing from the root.
std::vector<std::vector<std::size_t>> rows_per_node(const RegressionTree& tree, const BootstrapSample& s,
                                                    const Dataset& d) {
  std::vector<std::vector<std::size_t>> out(tree.nodes().size());
  for (std::size_t i = 0; i < d.rows(); ++i) {
    if (s.count(i) == 0) continue;
    std::size_t k = 0;
    while (true) {
      out[k].push_back(i);
      const TreeNode& node = tree.nodes()[k];
      if (node.is_leaf()) break;
      k = static_cast<std::size_t>(d.x(i, static_cast<std::size_t>(node.feature)) < node.cut ? node.left
                                                                                               : node.right);
    }
  }
  return out;
}

double weighted_sse(const std::vector<std::size_t>& rows, const BootstrapSample& s, const Dataset& d) {
  double n = 0.0;
  double sum = 0.0;
  for (std::size_t i : rows) {
    n += s.count(i);
    sum += s.count(i) * d.y(i);
  }
  const double mean = sum / n;
  double sse = 0.0;
  for (std::size_t i : rows) sse += s.count(i) * (d.y(i) - mean) * (d.y(i) - mean);
  return sse;
}

std::vector<std::pair<int, double>> structure(const RegressionTree& t) {
  std::vector<std::pair<int, double>> out;
  for (const TreeNode& n : t.nodes()) out.emplace_back(n.feature, n.is_leaf() ? 0.0 : n.cut);
  return out;
}

}  // namespace

TEST(Bootstrap, SingleRow) {
  Rng rng(3);
  EXPECT_EQ(bootstrap_sample(1, rng).counts(), std::vector<std::uint32_t>{1});
}

TEST(Bootstrap, OutOfBagFractionNearInverseE) {
  Rng rng(12345);
  const BootstrapSample s = bootstrap_sample(1000, rng);
  const auto total = std::accumulate(s.counts().begin(), s.counts().end(), std::uint64_t{0});
  EXPECT_EQ(total, 1000U);
  EXPECT_NEAR(double(s.oob_count()) / 1000.0, std::exp(-1.0), 0.05);
}

TEST(Bootstrap, DeterministicAndValidated) {
  Rng a(77);
  Rng b(77);
  EXPECT_EQ(bootstrap_sample(50, a).counts(), bootstrap_sample(50, b).counts());
  Rng c(1);
  EXPECT_THROW(bootstrap_sample(0, c), DomainError);
  EXPECT_THROW(BootstrapSample(std::vector<std::uint32_t>{2, 2}), InputError);
}

TEST(GrowCart, FourPointExampleSplitsAtMidpoint) {
  const Dataset d = four_points();
  GrowConfig cfg;
  cfg.q = 1;
  cfg.min_node = 2;
  Rng rng(1);
  const RegressionTree t = grow_cart(d, BootstrapSample::identity(4), cfg, rng);
  const TreeNode& root = t.nodes()[0];
  ASSERT_FALSE(root.is_leaf());
  EXPECT_EQ(root.feature, 0);
  EXPECT_DOUBLE_EQ(root.cut, 2.5);
  EXPECT_EQ(t.leaf_count(), 2U);
  EXPECT_DOUBLE_EQ(root.impurity_decrease, 100.0);  // parent SSE 100, children pure
  EXPECT_DOUBLE_EQ(t.nodes()[static_cast<std::size_t>(root.left)].mean, 0.0);
  EXPECT_DOUBLE_EQ(t.nodes()[static_cast<std::size_t>(root.right)].mean, 10.0);
}

TEST(GrowCart, ConstantResponseIsLeaf) {
  const Dataset d(Eigen::MatrixXd::Random(10, 2), Eigen::VectorXd::Constant(10, 4.0));
  GrowConfig cfg;
  cfg.q = 2;
  cfg.min_node = 1;
  Rng rng(2);
  const RegressionTree t = grow_cart(d, BootstrapSample::identity(10), cfg, rng);
  EXPECT_EQ(t.leaf_count(), 1U);
  EXPECT_DOUBLE_EQ(t.nodes()[0].mean, 4.0);
}

TEST(GrowCart, MinNodeAboveNGivesBootstrapMean) {
  const Dataset d = oracle::toy_data(20, 3, 4);
  GrowConfig cfg;
  cfg.q = 1;
  cfg.min_node = 21;
  Rng rng(5);
  const BootstrapSample s = bootstrap_sample(20, rng);
  const RegressionTree t = grow_cart(d, s, cfg, rng);
  ASSERT_EQ(t.leaf_count(), 1U);
  double sum = 0.0;
  for (std::size_t i = 0; i < 20; ++i) sum += s.count(i) * d.y(i);
  EXPECT_NEAR(t.nodes()[0].mean, sum / 20.0, 1e-12);
}

TEST(GrowCart, ChosenSplitMinimisesWeightedSse) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Dataset d = oracle::toy_data(40, 3, seed);
    GrowConfig cfg;
    cfg.q = 3;  // every feature is drawn, so the rescan covers the same candidates
    cfg.min_node = 4;
    Rng rng(seed);
    const BootstrapSample s = bootstrap_sample(40, rng);
    const RegressionTree t = grow_cart(d, s, cfg, rng);
    const auto rows = rows_per_node(t, s, d);
    for (std::size_t k = 0; k < t.nodes().size(); ++k) {
      const TreeNode& node = t.nodes()[k];
      if (node.is_leaf()) continue;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < 3; ++j) {
        std::vector<double> values;
        for (std::size_t i : rows[k]) values.push_back(d.x(i, j));
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        for (std::size_t v = 0; v + 1 < values.size(); ++v) {
          const double cut = 0.5 * (values[v] + values[v + 1]);
          std::vector<std::size_t> l;
          std::vector<std::size_t> r;
          for (std::size_t i : rows[k]) (d.x(i, j) < cut ? l : r).push_back(i);
          best = std::min(best, weighted_sse(l, s, d) + weighted_sse(r, s, d));
        }
      }
      const double chosen = weighted_sse(rows[static_cast<std::size_t>(node.left)], s, d) +
                            weighted_sse(rows[static_cast<std::size_t>(node.right)], s, d);
      EXPECT_NEAR(chosen, best, 1e-9 * std::max(1.0, best)) << "seed " << seed << " node " << k;
      EXPECT_NEAR(node.impurity_decrease, weighted_sse(rows[k], s, d) - chosen, 1e-8);
    }
  }
}

TEST(GrowCart, LeavesHoldBootstrapMeansAndStopRule) {
  const Dataset d = oracle::toy_data(100, 4, 8);
  GrowConfig cfg;
  cfg.q = 2;
  cfg.min_node = 10;
  Rng rng(8);
  const BootstrapSample s = bootstrap_sample(100, rng);
  const RegressionTree t = grow_cart(d, s, cfg, rng);
  const auto rows = rows_per_node(t, s, d);
  for (std::size_t k = 0; k < t.nodes().size(); ++k) {
    const TreeNode& node = t.nodes()[k];
    double n = 0.0;
    double sum = 0.0;
    for (std::size_t i : rows[k]) {
      n += s.count(i);
      sum += s.count(i) * d.y(i);
    }
    if (node.is_leaf()) {
      EXPECT_DOUBLE_EQ(node.size, n);
      EXPECT_GE(n, 1.0);
      EXPECT_NEAR(node.mean, sum / n, 1e-12);
    } else {
      EXPECT_GE(n, 10.0);
    }
  }
}

TEST(GrowSut, MidpointCutOfTwoValues) {
  Eigen::MatrixXd x(2, 1);
  x << 1, 3;
  const Dataset d(x, Eigen::Vector2d(0.0, 1.0));
  GrowConfig cfg;
  cfg.kind = TreeKind::Sut;
  cfg.min_node = 2;
  cfg.prob_seq = std::vector<double>{1.0};
  Rng rng(1);
  const RegressionTree t = grow_sut(d, BootstrapSample::identity(2), cfg, rng);
  ASSERT_FALSE(t.nodes()[0].is_leaf());
  EXPECT_DOUBLE_EQ(t.nodes()[0].cut, 2.0);
}

TEST(GrowSut, SingleFeatureBisectsNodeRange) {
  const Dataset d = oracle::toy_data(200, 1, 3);
  GrowConfig cfg;
  cfg.kind = TreeKind::Sut;
  cfg.q = 1;
  cfg.min_node = 5;
  cfg.prob_seq = std::vector<double>{1.0};
  Rng rng(4);
  const BootstrapSample s = bootstrap_sample(200, rng);
  const RegressionTree t = grow_sut(d, s, cfg, rng);
  const auto rows = rows_per_node(t, s, d);
  std::size_t internal = 0;
  for (std::size_t k = 0; k < t.nodes().size(); ++k) {
    const TreeNode& node = t.nodes()[k];
    if (node.is_leaf()) {
      EXPECT_TRUE(node.size < 5.0 || rows[k].size() == 1) << k;
      continue;
    }
    ++internal;
    EXPECT_EQ(node.feature, 0);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i : rows[k]) {
      lo = std::min(lo, d.x(i, 0));
      hi = std::max(hi, d.x(i, 0));
    }
    EXPECT_DOUBLE_EQ(node.cut, 0.5 * (lo + hi));
  }
  EXPECT_GT(internal, 10U);
}

TEST(GrowSut, DegenerateProbabilityUsesOnlyFeatureZero) {
  const Dataset d = oracle::toy_data(150, 4, 5);
  GrowConfig cfg;
  cfg.kind = TreeKind::Sut;
  cfg.q = 1;
  cfg.min_node = 5;
  cfg.prob_seq = std::vector<double>{1.0, 0.0, 0.0, 0.0};
  Rng rng(6);
  const RegressionTree t = grow_sut(d, bootstrap_sample(150, rng), cfg, rng);
  std::size_t internal = 0;
  for (const TreeNode& n : t.nodes()) {
    if (n.is_leaf()) continue;
    ++internal;
    EXPECT_EQ(n.feature, 0);
  }
  EXPECT_GT(internal, 0U);
}

TEST(GrowSut, StructureDoesNotDependOnResponse) {
  const Dataset a = oracle::toy_data(120, 3, 9, 1.0);
  Eigen::VectorXd other = a.y();
  std::mt19937_64 gen(4);
  std::normal_distribution<double> gauss(0.0, 3.0);
  for (Eigen::Index i = 0; i < other.size(); ++i) other(i) = gauss(gen);
  const Dataset b(a.x(), other);
  GrowConfig cfg;
  cfg.kind = TreeKind::Sut;
  cfg.q = 2;
  cfg.min_node = 5;
  cfg.prob_seq = std::vector<double>{0.5, 0.3, 0.2};
  Rng r1(10);
  Rng r2(10);
  const BootstrapSample s1 = bootstrap_sample(120, r1);
  const BootstrapSample s2 = bootstrap_sample(120, r2);
  EXPECT_EQ(structure(grow_sut(a, s1, cfg, r1)), structure(grow_sut(b, s2, cfg, r2)));
}

TEST(GrowConfig, Validation) {
  GrowConfig cfg;
  cfg.q = 4;
  EXPECT_THROW(cfg.validate(3), InputError);
  cfg.q = 1;
  cfg.min_node = 0;
  EXPECT_THROW(cfg.validate(3), InputError);
  cfg.min_node = 1;
  cfg.kind = TreeKind::Sut;
  cfg.prob_seq = std::vector<double>{0.5, 0.6, 0.0};
  EXPECT_THROW(cfg.validate(3), InputError);
  cfg.prob_seq = std::vector<double>{0.5, 0.5};
  EXPECT_THROW(cfg.validate(3), DimensionError);
  EXPECT_EQ(default_q(13), 5U);
  EXPECT_EQ(default_q(1), 1U);
  EXPECT_EQ(default_min_node(TreeKind::Cart, 253), 16U);
  EXPECT_EQ(default_min_node(TreeKind::Sut, 253), 5U);
}

TEST(Growth, DeterministicUnderSeed) {
  const Dataset d = oracle::toy_data(80, 4, 2);
  for (TreeKind kind : {TreeKind::Cart, TreeKind::Sut}) {
    const Forest f1 = oracle::toy_forest(d, 3, kind, 42);
    const Forest f2 = oracle::toy_forest(d, 3, kind, 42);
    for (std::size_t m = 0; m < 3; ++m) EXPECT_EQ(f1.trees[m].to_json().dump(), f2.trees[m].to_json().dump());
  }
}

TEST(Growth, ParallelMatchesSerial) {
  const Dataset d = oracle::toy_data(80, 4, 2);
  GrowConfig cfg;
  cfg.q = 2;
  cfg.min_node = 5;
  const Forest a = grow_forest(d, cfg, 6, 7, 1);
  const Forest b = grow_forest(d, cfg, 6, 7, 3);
  for (std::size_t m = 0; m < 6; ++m) EXPECT_EQ(a.trees[m].to_json().dump(), b.trees[m].to_json().dump());
}

TEST(Tree, JsonRoundTrip) {
  const Dataset d = oracle::toy_data(60, 3, 12);
  const Forest f = oracle::toy_forest(d, 1, TreeKind::Cart, 1);
  const RegressionTree back = RegressionTree::from_json(f.trees[0].to_json(), TreeKind::Cart);
  EXPECT_EQ(back.to_json().dump(), f.trees[0].to_json().dump());
  EXPECT_TRUE(back.predict(d.x()).isApprox(f.trees[0].predict(d.x())));
}

TEST(SutScore, EmptyChildIsRejected) {
  const Eigen::MatrixXd parent = Eigen::MatrixXd::Random(5, 2);
  EXPECT_EQ(sut_score(parent, parent, Eigen::MatrixXd(0, 2)), -std::numeric_limits<double>::infinity());
}

TEST(SutScore, TwoDistinctRowsScoreOne) {
  Eigen::MatrixXd parent(2, 2);
  parent << 0, 1, 2, 5;
  EXPECT_DOUBLE_EQ(sut_score(parent, parent.topRows(1), parent.bottomRows(1)), 1.0);
}

TEST(SutScore, ZeroParentNormScoresZero) {
  Eigen::MatrixXd parent(2, 2);
  parent << 1, 1, 1, 1;
  EXPECT_DOUBLE_EQ(sut_score(parent, parent.topRows(1), parent.bottomRows(1)), 0.0);
}

TEST(SutScore, BoundedByOneAndScaleFree) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::MatrixXd parent(12, 3);
    for (Eigen::Index i = 0; i < parent.size(); ++i) parent(i) = unif(gen);
    const Eigen::Index k = 1 + trial % 11;
    const double s = sut_score(parent, parent.topRows(k), parent.bottomRows(12 - k));
    EXPECT_LE(s, 1.0 + 1e-12);
    Eigen::MatrixXd scaled = parent;
    scaled.col(1) = 1000.0 * scaled.col(1).array() + 7.0;
    EXPECT_NEAR(s, sut_score(scaled, scaled.topRows(k), scaled.bottomRows(12 - k)), 1e-10);
  }
}

TEST(SutScore, FrobeniusNormOfScaledColumns) {
  Eigen::MatrixXd m(3, 2);
  m << 1, 4, 2, 4, 3, 4;  // second column constant contributes 0
  // centred (-1, 0, 1) with sd 1 -> norm sqrt(2)
  EXPECT_NEAR(scaled_frobenius_norm(m, Eigen::Vector3d::Ones()), std::sqrt(2.0), 1e-12);
  EXPECT_DOUBLE_EQ(scaled_frobenius_norm(m.topRows(1), Eigen::VectorXd::Ones(1)), 0.0);
}

TEST(HatMatrix, SingleLeafIsUniform) {
  const Dataset d = oracle::toy_data(7, 2, 1);
  GrowConfig cfg;
  cfg.min_node = 100;
  Rng rng(1);
  const RegressionTree t = grow_cart(d, BootstrapSample::identity(7), cfg, rng);
  const Eigen::MatrixXd p = hat_matrix(t, d).dense();
  EXPECT_TRUE(p.isApprox(Eigen::MatrixXd::Constant(7, 7, 1.0 / 7.0), 1e-15));
}

TEST(HatMatrix, FourPointStumpIsBlockDiagonal) {
  const Dataset d = four_points();
  GrowConfig cfg;
  cfg.min_node = 2;
  Rng rng(1);
  const RegressionTree t = grow_cart(d, BootstrapSample::identity(4), cfg, rng);
  Eigen::Matrix4d expected = Eigen::Matrix4d::Zero();
  expected.topLeftCorner(2, 2).setConstant(0.5);
  expected.bottomRightCorner(2, 2).setConstant(0.5);
  EXPECT_TRUE(hat_matrix(t, d).dense().isApprox(expected, 1e-15));
}

TEST(HatMatrix, SingletonLeafInterpolates) {
  const Dataset d = four_points();
  GrowConfig cfg;
  cfg.min_node = 1;
  Eigen::VectorXd y(4);
  y << 0, 1, 5, 11;
  const Dataset distinct(d.x(), y);
  Rng rng(1);
  const RegressionTree t = grow_cart(distinct, BootstrapSample::identity(4), cfg, rng);
  const HatMatrix h = hat_matrix(t, distinct);
  for (Eigen::Index i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(h.diag()(i), 1.0);
  EXPECT_TRUE(h.apply(y).isApprox(y));
}

TEST(HatMatrix, MatchesDenseOracle) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Dataset d = oracle::toy_data(50, 3, seed);
    const Forest f = oracle::toy_forest(d, 2, seed % 2 ? TreeKind::Sut : TreeKind::Cart, seed);
    for (std::size_t m = 0; m < 2; ++m) {
      const Eigen::MatrixXd expected = oracle::dense_hat(f.trees[m], f.samples[m], d);
      const HatMatrix& h = (*f.hats)[m];
      EXPECT_LT((h.dense() - expected).cwiseAbs().maxCoeff(), 1e-14);
      EXPECT_LT((h.diag() - expected.diagonal()).cwiseAbs().maxCoeff(), 1e-14);
      EXPECT_LT((hat_diagonal(f.trees[m], d) - expected.diagonal()).cwiseAbs().maxCoeff(), 1e-14);
      const Eigen::VectorXd sums = h.dense().rowwise().sum();
      EXPECT_LT((sums.array() - 1.0).abs().maxCoeff(), 1e-10);
      EXPECT_GE(h.dense().minCoeff(), 0.0);
      EXPECT_LE(h.dense().maxCoeff(), 1.0);
    }
  }
}

TEST(HatMatrix, DiagonalBoundedByLeafSize) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Dataset d = oracle::toy_data(150, 3, seed);
    GrowConfig cfg;
    cfg.q = 1;
    cfg.min_node = default_min_node(TreeKind::Cart, 150);
    const Forest f = grow_forest(d, cfg, 3, seed);
    for (std::size_t m = 0; m < 3; ++m) {
      const auto& counts = f.samples[m].counts();
      const double max_h = *std::max_element(counts.begin(), counts.end());
      EXPECT_LE(hat_diagonal(f.trees[m], d).maxCoeff(), max_h / f.trees[m].min_leaf_size() + 1e-15);
    }
  }
}

TEST(Importance, SingleFeatureCarriesEverything) {
  const Dataset d = oracle::toy_data(60, 1, 2);
  GrowConfig cfg;
  cfg.min_node = 5;
  const auto imp = variable_importance(d, cfg, 10, 3);
  ASSERT_EQ(imp.size(), 1U);
  EXPECT_GT(imp[0], 0.0);
}

TEST(Importance, PureNoiseIsRoughlyFlat) {
  std::mt19937_64 gen(8);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd x(300, 4);
  Eigen::VectorXd y(300);
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = gauss(gen);
  for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = gauss(gen);
  GrowConfig cfg;
  cfg.q = 2;
  cfg.min_node = default_min_node(TreeKind::Cart, 300);
  const auto imp = variable_importance(Dataset(x, y), cfg, 50, 5);
  const double mean = std::accumulate(imp.begin(), imp.end(), 0.0) / 4.0;
  for (double v : imp) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 3.0 * mean);
  }
}

TEST(Importance, RelevantFeatureRanksFirst) {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> unif;
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd x(300, 2);
  Eigen::VectorXd y(300);
  for (Eigen::Index i = 0; i < 300; ++i) {
    x(i, 0) = unif(gen);
    x(i, 1) = unif(gen);
    y(i) = 10.0 * x(i, 0) + gauss(gen);
  }
  GrowConfig cfg;
  cfg.min_node = 17;
  const auto imp = variable_importance(Dataset(x, y), cfg, 50, 1);
  EXPECT_GT(imp[0], imp[1]);
}

TEST(ProbSequence, Examples) {
  EXPECT_EQ(prob_sequence_from_importance({2, 2}), (std::vector<double>{0.5, 0.5}));
  const auto uniform = prob_sequence_from_importance({0, 0, 0});
  for (double v : uniform) EXPECT_DOUBLE_EQ(v, 1.0 / 3.0);
  EXPECT_EQ(prob_sequence_from_importance({3, 1, 0}), (std::vector<double>{0.75, 0.25, 0.0}));
  EXPECT_EQ(prob_sequence_from_importance({-1, 1}), (std::vector<double>{0.0, 1.0}));
}
