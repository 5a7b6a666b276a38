#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include "oracles.hpp"
#include "owrf/csv.hpp"
#include "owrf/error.hpp"
#include "owrf/evaluation.hpp"
#include "owrf/metrics.hpp"
#include "owrf/model_io.hpp"
#include "owrf/split.hpp"

using namespace owrf;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name, const std::string& text) {
  const fs::path dir = fs::temp_directory_path() / "owrf_test_bench";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p) << text;
  return p;
}

BenchConfig toy_bench() {
  BenchConfig cfg;
  cfg.trees = 2;
  cfg.reps = 1;
  cfg.importance_trees = 3;
  cfg.threads = 1;
  return cfg;
}

}  // namespace

TEST(Csv, ParsesHeaderAndTarget) {
  const Dataset d = parse_csv("a,b,y\n1,2,3\n4,5,6\n");
  EXPECT_EQ(d.rows(), 2U);
  EXPECT_EQ(d.cols(), 2U);
  EXPECT_DOUBLE_EQ(d.y(1), 6.0);
  EXPECT_EQ(d.names(), (std::vector<std::string>{"a", "b"}));
  const Dataset t = parse_csv("a,b,y\n1,2,3\n4,5,6\n", "a");
  EXPECT_DOUBLE_EQ(t.y(1), 4.0);
  EXPECT_EQ(t.names(), (std::vector<std::string>{"b", "y"}));
  EXPECT_DOUBLE_EQ(t.x(0, 1), 3.0);
}

TEST(Csv, SingleRowAndDelimiters) {
  EXPECT_EQ(parse_csv("a,y\n1,2\n").rows(), 1U);
  EXPECT_DOUBLE_EQ(parse_csv("a;y\n1;2\n").y(0), 2.0);
  EXPECT_DOUBLE_EQ(parse_csv("a\ty\r\n1\t2.5\r\n").y(0), 2.5);
}

TEST(Csv, ReportsBadCells) {
  try {
    parse_csv("a,y\n1,2\n,3\n4,NA\n");
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("3"), std::string::npos);
    EXPECT_NE(msg.find("4"), std::string::npos);
  }
  EXPECT_THROW(parse_csv("a,y\n1,abc\n"), InputError);
  EXPECT_THROW(parse_csv("a,y\n1,2,3\n"), InputError);
  EXPECT_THROW(parse_csv("a,y\n"), InputError);
  EXPECT_THROW(parse_csv("a,y\n1,2\n", "zz"), InputError);
}

TEST(Csv, FeaturesByName) {
  const Eigen::MatrixXd x = parse_features("y,b,a\n0,2,1\n0,4,3\n", {"a", "b"});
  EXPECT_EQ(x(1, 0), 3.0);
  EXPECT_EQ(x(1, 1), 4.0);
  EXPECT_THROW(parse_features("y,b\n0,2\n", {"a"}), InputError);
}

TEST(Manifest, LoadsAndChecksShape) {
  temp_file("toy.csv", "a,b,y\n1,2,3\n4,5,6\n7,8,9\n");
  const fs::path m = temp_file("manifest.json",
                               R"([{"name":"toy","path":"toy.csv","target":"y","expected_n":3,"expected_p":2}])");
  const auto entries = load_manifest(m);
  ASSERT_EQ(entries.size(), 1U);
  EXPECT_EQ(entries[0].name, "toy");
  EXPECT_EQ(load_dataset(entries[0]).rows(), 3U);
  ManifestEntry wrong = entries[0];
  wrong.expected_n = 4;
  EXPECT_THROW(load_dataset(wrong), InputError);
}

TEST(Datasets, BenchmarkShapesWhenAvailable) {
  const char* dir = std::getenv("OWRF_DATA_DIR");
  if (dir == nullptr) GTEST_SKIP() << "OWRF_DATA_DIR not set";
  const fs::path manifest = fs::path(dir) / "manifest.json";
  if (!fs::exists(manifest)) GTEST_SKIP() << "no manifest in OWRF_DATA_DIR";
  for (const auto& entry : load_manifest(manifest)) {
    const Dataset d = load_dataset(entry);
    if (entry.name == "BH") {
      EXPECT_EQ(d.rows(), 506U);
      EXPECT_EQ(d.cols(), 13U);
    }
    if (entry.name == "Servo") {
      EXPECT_EQ(d.rows(), 167U);
      EXPECT_EQ(d.cols(), 4U);
    }
  }
}

TEST(Split, Sizes) {
  EXPECT_EQ(split_sizes(10, {0.5, 0.3, 0.2}), (std::array<std::size_t, 3>{5, 3, 2}));
  EXPECT_EQ(split_sizes(506, {0.5, 0.3, 0.2}), (std::array<std::size_t, 3>{253, 152, 101}));
  EXPECT_EQ(split_sizes(1030, {0.5, 0.3, 0.2}), (std::array<std::size_t, 3>{515, 309, 206}));
}

TEST(Split, PartitionAndDeterminism) {
  const SplitPlan a = make_split(506, {0.5, 0.3, 0.2}, 7);
  const SplitPlan b = make_split(506, {0.5, 0.3, 0.2}, 7);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.test, b.test);
  EXPECT_NE(make_split(506, {0.5, 0.3, 0.2}, 8).train, a.train);
  std::set<std::size_t> all(a.train.begin(), a.train.end());
  all.insert(a.test.begin(), a.test.end());
  all.insert(a.validation.begin(), a.validation.end());
  EXPECT_EQ(all.size(), 506U);
  EXPECT_TRUE(std::is_sorted(a.test.begin(), a.test.end()));
}

TEST(Split, Errors) {
  EXPECT_THROW(make_split(2), InputError);
  EXPECT_THROW(make_split(10, {0.5, 0.5, 0.5}), InputError);
  EXPECT_THROW(make_split(10, {0.0, 0.5, 0.5}), InputError);
}

TEST(Metrics, Examples) {
  EXPECT_DOUBLE_EQ(msfe(Eigen::Vector2d(1, -1), Eigen::Vector2d::Zero()), 1.0);
  EXPECT_DOUBLE_EQ(mafe(Eigen::Vector2d(1, -1), Eigen::Vector2d::Zero()), 1.0);
  EXPECT_DOUBLE_EQ(msfe(Eigen::Vector3d(3, 0, -3), Eigen::Vector3d::Zero()), 6.0);
  EXPECT_DOUBLE_EQ(mafe(Eigen::Vector3d(3, 0, -3), Eigen::Vector3d::Zero()), 2.0);
  EXPECT_THROW(msfe(Eigen::VectorXd(0), Eigen::VectorXd(0)), InputError);
  EXPECT_THROW(msfe(Eigen::Vector2d::Zero(), Eigen::Vector3d::Zero()), DimensionError);
}

TEST(Metrics, RelativeRisk) {
  const RelativeRisk a = relative_risk(9.509, 1.0);
  EXPECT_TRUE(a.essential);
  EXPECT_DOUBLE_EQ(*a.ratio, 9.509);
  EXPECT_FALSE(relative_risk(1.04, 1.0).essential);
  EXPECT_TRUE(relative_risk(0.95, 1.0).essential);
  const RelativeRisk z = relative_risk(1.0, 0.0);
  EXPECT_TRUE(z.undefined);
  EXPECT_FALSE(z.ratio.has_value());
  const auto all = relative_risks({{"a", 2.0}, {"b", 4.0}}, "a");
  EXPECT_DOUBLE_EQ(*all.at("b").ratio, 2.0);
  EXPECT_DOUBLE_EQ(*all.at("a").ratio, 1.0);
}

TEST(Metrics, Ranks) {
  EXPECT_EQ(ranks({3.0, 1.0, 2.0}), (std::vector<std::size_t>{3, 1, 2}));
  EXPECT_EQ(ranks({1.0, 1.0, 0.5}), (std::vector<std::size_t>{2, 3, 1}));
}

TEST(Benchmark, ToyRunShape) {
  const Dataset d = oracle::toy_data(20, 2, 1);
  const EvalReport r = run_benchmark(d, toy_bench(), "toy");
  ASSERT_TRUE(r.failures.empty()) << r.failures.front().message;
  ASSERT_EQ(r.kinds.size(), 1U);
  const KindSummary& k = r.at(TreeKind::Cart);
  EXPECT_EQ(k.completed, 1U);
  ASSERT_EQ(k.methods.size(), 5U);
  std::set<std::size_t> msfe_ranks;
  for (const auto& m : k.methods) {
    EXPECT_TRUE(std::isfinite(m.msfe));
    msfe_ranks.insert(m.msfe_rank);
  }
  EXPECT_EQ(msfe_ranks, (std::set<std::size_t>{1, 2, 3, 4, 5}));
  EXPECT_DOUBLE_EQ(*k.at(Method::TwoSteps).relative.ratio, 1.0);
  EXPECT_NE(r.to_markdown().find("MSFE"), std::string::npos);
  EXPECT_EQ(r.to_json()["schema_version"], kReportSchemaVersion);
}

TEST(Benchmark, DeterministicWithoutTimings) {
  const Dataset d = oracle::toy_data(40, 3, 2);
  BenchConfig cfg = toy_bench();
  cfg.reps = 2;
  cfg.kinds = {TreeKind::Cart, TreeKind::Sut};
  cfg.record_timings = false;
  const std::string a = run_benchmark(d, cfg).to_json().dump();
  cfg.threads = 2;
  EXPECT_EQ(a, run_benchmark(d, cfg).to_json().dump());
}

TEST(Benchmark, RejectsBadConfig) {
  const Dataset d = oracle::toy_data(20, 2, 1);
  BenchConfig cfg = toy_bench();
  cfg.reps = 0;
  EXPECT_THROW(run_benchmark(d, cfg), InputError);
  cfg.reps = 1;
  cfg.lambda_grid = {};
  EXPECT_THROW(run_benchmark(d, cfg), InputError);
}

TEST(ModelIo, RoundTrip) {
  const Dataset d = oracle::toy_data(30, 2, 3);
  Model m;
  m.forest = oracle::toy_forest(d, 3, TreeKind::Sut, 3);
  m.forest.weights = WeightVector(Eigen::Vector3d(0.2, 0.3, 0.5));
  m.forest.method = Method::OneStep;
  m.feature_names = {"x1", "x2"};
  const Model back = model_from_json(model_to_json(m));
  EXPECT_EQ(back.forest.method, Method::OneStep);
  EXPECT_EQ(back.feature_names, m.feature_names);
  EXPECT_EQ(aggregate_predict(back.forest, d.x()), aggregate_predict(m.forest, d.x()));
  nlohmann::json bad = model_to_json(m);
  bad["schema_version"] = 99;
  EXPECT_THROW(model_from_json(bad), InputError);
}
