// owrf: fit, predict, bench and simulate optimally weighted random forests.

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "owrf/commands.hpp"

namespace {

using owrf::cli::RunConfig;

void add_forest_options(CLI::App& app, RunConfig& c, std::string& kind) {
  app.add_option("--trees", c.trees, "Number of trees M_n")->check(CLI::PositiveNumber);
  app.add_option("--q", c.q, "Features tried per split (default ceil(p/3))")->check(CLI::PositiveNumber);
  app.add_option("--min-leaf", c.min_leaf, "Minimum node size to split (default sqrt(n) CART, 5 SUT)")
      ->check(CLI::PositiveNumber);
  app.add_option("--tree-kind", kind, "Tree kind: cart, sut or both (bench only)")
      ->check(CLI::IsMember({"cart", "sut", "both"}));
  app.add_option("--seed", c.seed, "Master random seed");
  app.add_option("--threads", c.threads, "Worker threads (0 = all cores)");
  app.add_option("--out", c.out, "Output file (default stdout)");
}

void add_data_options(CLI::App& app, RunConfig& c) {
  auto* data = app.add_option("--data", c.data, "CSV file with a header row")->check(CLI::ExistingFile);
  auto* manifest =
      app.add_option("--manifest", c.manifest, "Manifest JSON {name, path, target, expected_n, expected_p}")
          ->check(CLI::ExistingFile);
  data->excludes(manifest);
  app.add_option("--target", c.target, "Response column (default: last column)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimally weighted random forests"};
  app.require_subcommand(1);
  RunConfig c;
  std::string kind = "cart";
  std::string method = "2steps";

  auto* fit = app.add_subcommand("fit", "Grow a forest, weight its trees and write a model file");
  add_data_options(*fit, c);
  add_forest_options(*fit, c, kind);
  fit->add_option("--method", method, "Weighting: rf, 1step, 2steps, wrf, crf")
      ->check(CLI::IsMember({"rf", "1step", "2steps", "wrf", "crf"}));
  fit->add_option("--lambda", c.lambda, "wRF exponent")->check(CLI::NonNegativeNumber);
  fit->add_flag("!--no-timings", c.timings, "Omit wall-clock fields");

  auto* predict = app.add_subcommand("predict", "Predict with a saved model");
  predict->add_option("--model", c.model, "Model file from fit")->required()->check(CLI::ExistingFile);
  predict->add_option("--data", c.data, "CSV with the model's feature columns")->required()->check(CLI::ExistingFile);
  predict->add_option("--out", c.out, "Output file (default stdout)");

  auto* bench = app.add_subcommand("bench", "Split/fit/score replications comparing all five weightings");
  add_data_options(*bench, c);
  add_forest_options(*bench, c, kind);
  bench->add_option("--reps", c.reps, "Replications D")->check(CLI::PositiveNumber);
  bench->add_option("--lambda", c.lambda, "Fixed wRF exponent (skips tuning)")->check(CLI::NonNegativeNumber);
  bench->add_option("--lambda-grid", c.lambda_grid, "wRF exponents tuned on the validation split")
      ->delimiter(',');
  bench->add_option("--format", c.format, "json or md")->check(CLI::IsMember({"json", "md"}));
  bench->add_flag("!--no-timings", c.timings, "Omit timings (byte-identical reports per seed)");

  auto* simulate = app.add_subcommand("simulate", "Loss-ratio study against the infeasible best weights");
  add_forest_options(*simulate, c, kind);
  simulate->add_option("--n", c.n_values, "Sample sizes")->delimiter(',');
  simulate->add_option("--reps", c.reps, "Replications per sample size")->check(CLI::PositiveNumber);
  simulate->add_option("--p", c.p, "Number of predictors")->check(CLI::PositiveNumber);
  simulate->add_option("--mean", c.mean, "Mean function")->check(CLI::IsMember({"linear", "friedman", "step"}));
  simulate->add_option("--noise", c.noise, "Noise kind")->check(CLI::IsMember({"homo", "hetero"}));
  simulate->add_option("--sigma", c.sigma, "Noise scale")->check(CLI::PositiveNumber);
  simulate->add_option("--format", c.format, "json or md")->check(CLI::IsMember({"json", "md"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? owrf::cli::kExitOk : owrf::cli::kExitError;
  }

  c.subcommand = app.get_subcommands().front()->get_name();
  if (c.subcommand == "simulate" && simulate->count("--reps") == 0) c.reps = 20;
  if (c.subcommand == "simulate" && simulate->count("--tree-kind") == 0) kind = "sut";
  try {
    c.method = owrf::method_from_string(method);
    if (kind == "both") {
      if (c.subcommand != "bench") throw std::invalid_argument("--tree-kind both is only valid for bench");
      c.kinds = {owrf::TreeKind::Cart, owrf::TreeKind::Sut};
    } else {
      c.kinds = {owrf::tree_kind_from_string(kind)};
    }
  } catch (const std::exception& ex) {
    std::cerr << "owrf: " << ex.what() << '\n';
    return owrf::cli::kExitError;
  }
  return owrf::cli::run(c, std::cout, std::cerr);
}
