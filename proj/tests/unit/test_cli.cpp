#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>
#include <sys/wait.h>

#include "oracles.hpp"
#include "owrf/commands.hpp"
#include "owrf/criteria.hpp"
#include "owrf/csv.hpp"
#include "owrf/model_io.hpp"

using namespace owrf;
using namespace owrf::cli;
namespace fs = std::filesystem;

namespace {

fs::path work_dir() {
  const fs::path dir = fs::temp_directory_path() / "owrf_test_cli";
  fs::create_directories(dir);
  return dir;
}

fs::path toy_csv() {
  const fs::path p = work_dir() / "toy.csv";
  const Dataset d = oracle::toy_data(60, 3, 5);
  std::ofstream f(p);
  f << "x1,x2,x3,y\n";
  for (std::size_t i = 0; i < d.rows(); ++i) {
    f << d.x(i, 0) << ',' << d.x(i, 1) << ',' << d.x(i, 2) << ',' << d.y(i) << '\n';
  }
  return p;
}

RunConfig fit_config(Method method) {
  RunConfig c;
  c.subcommand = "fit";
  c.data = toy_csv().string();
  c.method = method;
  c.trees = 8;
  c.threads = 1;
  return c;
}

nlohmann::json run_json(const RunConfig& c, int expected = kExitOk) {
  std::ostringstream out;
  std::ostringstream err;
  EXPECT_EQ(run(c, out, err), expected) << err.str();
  return nlohmann::json::parse(out.str());
}

int shell(const std::string& cmd) {
  const int status = std::system((cmd + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(CliFit, EqualWeightsForPlainForest) {
  const nlohmann::json j = run_json(fit_config(Method::Rf));
  EXPECT_EQ(j["method"], "rf");
  for (double w : j["weights"].get<std::vector<double>>()) EXPECT_DOUBLE_EQ(w, 1.0 / 8.0);
}

TEST(CliFit, OneStepNotWorseThanTwoSteps) {
  const Model one = model_from_json(run_json(fit_config(Method::OneStep)));
  const Model two = model_from_json(run_json(fit_config(Method::TwoSteps)));
  const Dataset d = load_csv(toy_csv());
  const CriterionContext ctx = CriterionContext::from_forest(one.forest, d);
  EXPECT_LE(criterion_c_prime(ctx, one.forest.weights->values()),
            criterion_c_prime(ctx, two.forest.weights->values()) + 1e-9);
}

TEST(CliFit, SameSeedSameModel) {
  RunConfig c = fit_config(Method::Crf);
  c.kinds = {TreeKind::Sut};
  EXPECT_EQ(run_json(c).dump(), run_json(c).dump());
}

TEST(CliPredict, MatchesModel) {
  RunConfig c = fit_config(Method::TwoSteps);
  c.out = (work_dir() / "model.json").string();
  std::ostringstream out, err;
  ASSERT_EQ(run(c, out, err), kExitOk) << err.str();
  RunConfig p;
  p.subcommand = "predict";
  p.model = c.out;
  p.data = c.data;
  const nlohmann::json j = run_json(p);
  const Model m = load_model(c.out);
  const Eigen::VectorXd expected = aggregate_predict(m.forest, load_csv(c.data).x());
  const auto preds = j["predictions"].get<std::vector<double>>();
  ASSERT_EQ(preds.size(), 60U);
  for (std::size_t i = 0; i < preds.size(); ++i) EXPECT_DOUBLE_EQ(preds[i], expected(static_cast<Eigen::Index>(i)));
}

TEST(CliBench, SmallRun) {
  RunConfig c;
  c.subcommand = "bench";
  c.data = toy_csv().string();
  c.trees = 4;
  c.reps = 2;
  c.threads = 1;
  c.timings = false;
  const nlohmann::json j = run_json(c);
  EXPECT_EQ(j["dataset"], "toy");
  c.format = "md";
  std::ostringstream out, err;
  EXPECT_EQ(run(c, out, err), kExitOk);
  EXPECT_NE(out.str().find('|'), std::string::npos);
}

TEST(CliSimulate, SmallRun) {
  RunConfig c;
  c.subcommand = "simulate";
  c.n_values = {30};
  c.trees = 4;
  c.reps = 1;
  c.kinds = {TreeKind::Sut};
  const nlohmann::json j = run_json(c);
  EXPECT_EQ(j["rows"].size(), 1U);
}

TEST(CliErrors, BadInputExitsTwo) {
  std::ostringstream out, err;
  RunConfig c = fit_config(Method::Rf);
  c.data = (work_dir() / "missing.csv").string();
  EXPECT_EQ(run(c, out, err), kExitError);
  EXPECT_FALSE(err.str().empty());
  c = fit_config(Method::Rf);
  c.trees = 0;
  EXPECT_EQ(run(c, out, err), kExitError);
  c.subcommand = "nope";
  EXPECT_EQ(run(c, out, err), kExitError);
}

TEST(CliBinary, ExitCodes) {
  const std::string exe = OWRF_CLI_PATH;
  const std::string data = toy_csv().string();
  EXPECT_EQ(shell(exe + " fit --data " + data + " --trees 3 --method 1step --threads 1"), 0);
  EXPECT_EQ(shell(exe + " fit --data " + data + " --trees 0"), 2);
  EXPECT_EQ(shell(exe + " fit --data " + data + " --method bogus"), 2);
  EXPECT_EQ(shell(exe + " bench --data " + data + " --trees 2 --reps 1 --threads 1 --no-timings"), 0);
  EXPECT_NE(shell(exe + " frobnicate"), 0);
}
