#include "owrf/commands.hpp"

#include <fstream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "owrf/criteria.hpp"
#include "owrf/csv.hpp"
#include "owrf/error.hpp"
#include "owrf/evaluation.hpp"
#include "owrf/grow.hpp"
#include "owrf/importance.hpp"
#include "owrf/model_io.hpp"
#include "owrf/oob_weights.hpp"
#include "owrf/optimal_weights.hpp"
#include "owrf/ratio_study.hpp"

namespace owrf::cli {

namespace {

struct NamedData {
  std::string name;
  Dataset data;
};

NamedData load_input(const RunConfig& c) {
  if (!c.manifest.empty()) {
    const auto entries = load_manifest(c.manifest);
    if (entries.size() != 1) throw InputError("manifest must list exactly one dataset for this command");
    return {entries.front().name, load_dataset(entries.front())};
  }
  if (c.data.empty()) throw InputError("no dataset given (use --data or --manifest)");
  return {std::filesystem::path(c.data).stem().string(), load_csv(c.data, c.target)};
}

void emit(const RunConfig& c, std::ostream& fallback, const std::string& text) {
  if (c.out.empty()) {
    fallback << text;
    return;
  }
  std::ofstream file(c.out);
  if (!file) throw InputError("cannot write " + c.out);
  file << text;
  if (!file) throw InputError("write to " + c.out + " failed");
}

}  // namespace

void RunConfig::validate() const {
  if (trees && *trees < 1) throw InputError("--trees must be >= 1");
  if (q && *q < 1) throw InputError("--q must be >= 1");
  if (min_leaf && *min_leaf < 1) throw InputError("--min-leaf must be >= 1");
  if (reps < 1) throw InputError("--reps must be >= 1");
  if (kinds.empty()) throw InputError("--tree-kind needs a value");
  if (format != "json" && format != "md") throw InputError("--format must be json or md");
  if (lambda && *lambda < 0.0) throw InputError("--lambda must be >= 0");
  if (p < 1 || !(sigma > 0.0)) throw InputError("--p and --sigma must be positive");
  for (std::size_t n : n_values) {
    if (n < 1) throw InputError("--n values must be >= 1");
  }
}

int cmd_fit(const RunConfig& c, std::ostream& out) {
  c.validate();
  const NamedData in = load_input(c);
  const Dataset& data = in.data;
  GrowConfig cfg;
  cfg.kind = c.kinds.front();
  cfg.q = c.q.value_or(default_q(data.cols()));
  cfg.min_node = c.min_leaf.value_or(default_min_node(cfg.kind, data.rows()));
  const std::size_t trees = c.trees.value_or(100);
  const double lambda = c.lambda.value_or(1.0);
  if (cfg.kind == TreeKind::Sut) {
    // no validation rows here: importance comes from CART trees on the training data
    GrowConfig cart;
    cart.q = cfg.q;
    cart.min_node = default_min_node(TreeKind::Cart, data.rows());
    cfg.prob_seq = prob_sequence_from_importance(variable_importance(data, cart, 100, mix_seed(c.seed, 1), c.threads));
  }

  Model model;
  model.forest = grow_forest(data, cfg, trees, c.seed, c.threads);
  model.feature_names = data.names();
  Forest& forest = model.forest;
  forest.method = c.method;
  switch (c.method) {
    case Method::Rf:
      forest.weights = WeightVector::equal(trees);
      break;
    case Method::TwoSteps:
    case Method::OneStep: {
      const CriterionContext ctx = CriterionContext::from_forest(forest, data);
      model.solve = c.method == Method::TwoSteps ? solve_two_steps(ctx) : solve_one_step(ctx);
      forest.weights = model.solve->w;
      break;
    }
    case Method::Wrf:
      forest.weights = wrf_weights(forest, data, lambda);
      break;
    case Method::Crf:
      forest.weights = crf_weights(forest, data);
      break;
  }
  model.config = {{"dataset", in.name}, {"n", data.rows()},        {"trees", trees},
                  {"q", cfg.q},         {"min_node", cfg.min_node}, {"tree_kind", to_string(cfg.kind)},
                  {"seed", c.seed},     {"lambda", lambda}};
  nlohmann::json j = model_to_json(model);
  if (!c.timings && !j["solve_report"].is_null()) j["solve_report"].erase("wall_time_s");
  emit(c, out, j.dump(1) + "\n");
  return kExitOk;
}

int cmd_predict(const RunConfig& c, std::ostream& out) {
  if (c.model.empty()) throw InputError("predict needs --model");
  if (c.data.empty()) throw InputError("predict needs --data");
  const Model model = load_model(c.model);
  const Eigen::MatrixXd x = load_features(c.data, model.feature_names);
  const Eigen::VectorXd preds = aggregate_predict(model.forest, x);
  nlohmann::json j{{"schema_version", kModelSchemaVersion},
                   {"kind", "predictions"},
                   {"method", to_string(model.forest.method)},
                   {"predictions", std::vector<double>(preds.data(), preds.data() + preds.size())}};
  emit(c, out, j.dump(1) + "\n");
  return kExitOk;
}

int cmd_bench(const RunConfig& c, std::ostream& out) {
  c.validate();
  const NamedData in = load_input(c);
  BenchConfig bc;
  bc.trees = c.trees.value_or(100);
  bc.q = c.q;
  bc.min_node = c.min_leaf;
  bc.kinds = c.kinds;
  bc.reps = c.reps;
  bc.seed = c.seed;
  bc.lambda_grid = c.lambda ? std::vector<double>{*c.lambda} : c.lambda_grid;
  bc.threads = c.threads;
  bc.record_timings = c.timings;
  const EvalReport report = run_benchmark(in.data, bc, in.name);
  emit(c, out, c.format == "md" ? report.to_markdown() : report.to_json().dump(1) + "\n");
  return report.failures.empty() ? kExitOk : kExitFailures;
}

int cmd_simulate(const RunConfig& c, std::ostream& out) {
  c.validate();
  RatioStudyConfig rc;
  rc.n_values = c.n_values;
  rc.trees = c.trees.value_or(50);
  rc.kind = c.kinds.front();
  rc.reps = c.reps;
  rc.p = c.p;
  rc.mean = mean_function_from_string(c.mean);
  rc.noise = noise_kind_from_string(c.noise);
  rc.sigma = c.sigma;
  rc.q = c.q;
  rc.min_node = c.min_leaf;
  rc.seed = c.seed;
  rc.threads = c.threads;
  const RatioReport report = optimality_ratio_study(rc);
  emit(c, out, c.format == "md" ? report.to_text() : report.to_json().dump(1) + "\n");
  return kExitOk;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.subcommand == "fit") return cmd_fit(config, out);
    if (config.subcommand == "predict") return cmd_predict(config, out);
    if (config.subcommand == "bench") return cmd_bench(config, out);
    if (config.subcommand == "simulate") return cmd_simulate(config, out);
    err << "owrf: unknown subcommand '" << config.subcommand << "'\n";
  } catch (const std::exception& ex) {
    err << "owrf " << config.subcommand << ": " << ex.what() << '\n';
  }
  return kExitError;
}

}  // namespace owrf::cli
