#include "owrf/evaluation.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <mutex>
#include <sstream>

#include "owrf/error.hpp"
#include "owrf/grow.hpp"
#include "owrf/importance.hpp"
#include "owrf/optimal_weights.hpp"
#include "owrf/parallel.hpp"
#include "owrf/random.hpp"
#include "owrf/split.hpp"

namespace owrf {

namespace {

std::string form_name(WrfForm form) {
  switch (form) {
    case WrfForm::OneMinus: return "one_minus";
    case WrfForm::Exponential: return "exponential";
    case WrfForm::InversePower: return "inverse_power";
  }
  return "inverse_power";
}

template <typename Fn>
double seconds(Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (double x : v) s += x;
  return s / double(v.size());
}

std::string method_label(Method m) {
  switch (m) {
    case Method::Rf: return "RF";
    case Method::TwoSteps: return "2steps-WRF_opt";
    case Method::OneStep: return "1step-WRF_opt";
    case Method::Wrf: return "wRF";
    case Method::Crf: return "CRF";
  }
  return "?";
}

std::string fmt(double v, int precision = 3) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << v;
  return os.str();
}

}  // namespace

void BenchConfig::validate() const {
  if (reps < 1) throw InputError("bench needs reps >= 1");
  if (trees < 1) throw InputError("bench needs trees >= 1");
  if (kinds.empty()) throw InputError("bench needs at least one tree kind");
  if (lambda_grid.empty()) throw InputError("bench needs a non-empty lambda grid");
  for (double l : lambda_grid) {
    if (!std::isfinite(l) || l < 0.0) throw InputError("lambda values must be finite and >= 0");
  }
  if (importance_trees < 1) throw InputError("bench needs importance_trees >= 1");
  if (q && *q < 1) throw InputError("q must be >= 1");
  if (min_node && *min_node < 1) throw InputError("min_node must be >= 1");
}

nlohmann::json BenchConfig::to_json() const {
  nlohmann::json k = nlohmann::json::array();
  for (TreeKind kind : kinds) k.push_back(to_string(kind));
  return {{"trees", trees},
          {"q", q ? nlohmann::json(*q) : nlohmann::json(nullptr)},
          {"min_node", min_node ? nlohmann::json(*min_node) : nlohmann::json(nullptr)},
          {"tree_kinds", k},
          {"reps", reps},
          {"seed", seed},
          {"ratios", ratios},
          {"lambda_grid", lambda_grid},
          {"wrf_form", form_name(wrf_form)},
          {"importance_trees", importance_trees}};
}

Weightings compute_weightings(const Forest& forest, const Dataset& train, const CriterionContext& ctx,
                              const std::vector<double>& lambda_grid, WrfForm form, const Dataset* validation) {
  if (lambda_grid.empty()) throw InputError("empty lambda grid");
  Weightings out;
  const std::size_t m = forest.size();
  out.weights.emplace(Method::Rf, WeightVector::equal(m));

  std::optional<SolveReport> two;
  out.two_steps_seconds = seconds([&] { two = solve_two_steps(ctx); });
  out.weights.emplace(Method::TwoSteps, two->w);
  out.two_steps = std::move(two);

  std::optional<SolveReport> one;
  out.one_step_seconds = seconds([&] { one = solve_one_step(ctx); });
  out.weights.emplace(Method::OneStep, one->w);
  out.one_step = std::move(one);

  const auto errors = tpe_stars(forest, train);
  out.lambda = lambda_grid.front();
  if (validation != nullptr && lambda_grid.size() > 1) {
    const Eigen::MatrixXd preds = tree_predictions(forest, validation->x());
    double best = std::numeric_limits<double>::infinity();
    for (double lambda : lambda_grid) {
      const WeightVector w = wrf_weights_from_errors(errors, lambda, form);
      const double score = msfe(preds * w.values(), validation->y());
      if (score < best) {
        best = score;
        out.lambda = lambda;
      }
    }
  }
  out.weights.emplace(Method::Wrf, wrf_weights_from_errors(errors, out.lambda, form));
  out.weights.emplace(Method::Crf, crf_weights_from_errors(errors));
  return out;
}

std::vector<ReplicationResult> run_replication(const Dataset& data, const BenchConfig& config, std::size_t d,
                                               unsigned threads) {
  const std::uint64_t rep_seed = mix_seed(config.seed, d);
  const SplitPlan plan = make_split(data.rows(), config.ratios, rep_seed);
  const Dataset train = data.subset(plan.train);
  const Dataset test = data.subset(plan.test);
  const Dataset validation = data.subset(plan.validation);
  const std::size_t p = data.cols();

  std::vector<ReplicationResult> results;
  for (std::size_t k = 0; k < config.kinds.size(); ++k) {
    const TreeKind kind = config.kinds[k];
    GrowConfig cfg;
    cfg.kind = kind;
    cfg.q = config.q.value_or(default_q(p));
    cfg.min_node = config.min_node.value_or(default_min_node(kind, train.rows()));
    if (kind == TreeKind::Sut) {
      GrowConfig cart;
      cart.kind = TreeKind::Cart;
      cart.q = cfg.q;
      cart.min_node = default_min_node(TreeKind::Cart, validation.rows());
      const auto importance =
          variable_importance(validation, cart, config.importance_trees, mix_seed(rep_seed, 1), threads);
      cfg.prob_seq = prob_sequence_from_importance(importance);
    }

    Forest forest = grow_forest(train, cfg, config.trees, mix_seed(rep_seed, 2 + k), threads);
    attach_hats(forest, train, threads);
    const CriterionContext ctx = CriterionContext::from_hats(train.y(), forest.hats);
    const Weightings wts = compute_weightings(forest, train, ctx, config.lambda_grid, config.wrf_form, &validation);

    ReplicationResult r;
    r.kind = kind;
    r.q = cfg.q;
    r.min_node = cfg.min_node;
    r.lambda = wts.lambda;
    r.two_steps_seconds = wts.two_steps_seconds;
    r.one_step_seconds = wts.one_step_seconds;
    for (Method method : kBenchMethods) {
      const Eigen::VectorXd preds = aggregate_predict(forest, test.x(), wts.weights.at(method));
      r.msfe[method] = msfe(preds, test.y());
      r.mafe[method] = mafe(preds, test.y());
    }
    results.push_back(std::move(r));
  }
  return results;
}

const MethodSummary& KindSummary::at(Method m) const {
  for (const auto& s : methods) {
    if (s.method == m) return s;
  }
  throw InputError("method " + to_string(m) + " missing from report");
}

double KindSummary::time_ratio() const {
  return two_steps_seconds > 0.0 ? one_step_seconds / two_steps_seconds : std::numeric_limits<double>::quiet_NaN();
}

const KindSummary& EvalReport::at(TreeKind kind) const {
  for (const auto& k : kinds) {
    if (k.kind == kind) return k;
  }
  throw InputError("tree kind " + to_string(kind) + " missing from report");
}

EvalReport run_benchmark(const Dataset& data, const BenchConfig& config, const std::string& name) {
  config.validate();
  const unsigned threads = config.threads == 0 ? default_threads() : config.threads;
  const bool outer = threads > 1 && config.reps > 1;

  std::vector<std::optional<std::vector<ReplicationResult>>> results(config.reps);
  std::vector<std::string> errors(config.reps);
  parallel_for(config.reps, outer ? threads : 1U, [&](std::size_t d) {
    try {
      results[d] = run_replication(data, config, d, outer ? 1U : threads);
    } catch (const std::exception& ex) {
      errors[d] = ex.what();
    }
  });

  EvalReport report;
  report.dataset = name;
  report.n = data.rows();
  report.p = data.cols();
  report.config = config;
  for (std::size_t d = 0; d < config.reps; ++d) {
    if (!results[d]) report.failures.push_back({d, errors[d]});
  }

  for (std::size_t k = 0; k < config.kinds.size(); ++k) {
    KindSummary ks;
    ks.kind = config.kinds[k];
    std::vector<double> t2;
    std::vector<double> t1;
    for (Method method : kBenchMethods) {
      MethodSummary ms;
      ms.method = method;
      ks.methods.push_back(std::move(ms));
    }
    for (const auto& rep : results) {
      if (!rep) continue;
      const ReplicationResult& r = (*rep)[k];
      ++ks.completed;
      ks.q = r.q;
      ks.min_node = r.min_node;
      ks.lambdas.push_back(r.lambda);
      t2.push_back(r.two_steps_seconds);
      t1.push_back(r.one_step_seconds);
      for (auto& ms : ks.methods) {
        ms.msfe_reps.push_back(r.msfe.at(ms.method));
        ms.mafe_reps.push_back(r.mafe.at(ms.method));
      }
    }
    ks.two_steps_seconds = mean(t2);
    ks.one_step_seconds = mean(t1);
    std::vector<double> msfes;
    std::vector<double> mafes;
    std::map<std::string, double> risks;
    for (auto& ms : ks.methods) {
      ms.msfe = mean(ms.msfe_reps);
      ms.mafe = mean(ms.mafe_reps);
      msfes.push_back(ms.msfe);
      mafes.push_back(ms.mafe);
      risks[to_string(ms.method)] = ms.msfe;
    }
    if (ks.completed > 0) {
      const auto r1 = ranks(msfes);
      const auto r2 = ranks(mafes);
      const auto rel = relative_risks(risks, to_string(Method::TwoSteps));
      for (std::size_t i = 0; i < ks.methods.size(); ++i) {
        ks.methods[i].msfe_rank = r1[i];
        ks.methods[i].mafe_rank = r2[i];
        ks.methods[i].relative = rel.at(to_string(ks.methods[i].method));
      }
    }
    report.kinds.push_back(std::move(ks));
  }
  return report;
}

nlohmann::json EvalReport::to_json() const {
  nlohmann::json out{{"schema_version", kReportSchemaVersion},
                     {"kind", "eval_report"},
                     {"dataset", dataset},
                     {"n", n},
                     {"p", p},
                     {"config", config.to_json()},
                     {"benchmark_method", to_string(Method::TwoSteps)}};
  out["results"] = nlohmann::json::array();
  for (const KindSummary& ks : kinds) {
    nlohmann::json kj{{"tree_kind", to_string(ks.kind)},
                      {"completed", ks.completed},
                      {"q", ks.q},
                      {"min_node", ks.min_node},
                      {"lambdas", ks.lambdas}};
    kj["methods"] = nlohmann::json::array();
    for (const MethodSummary& ms : ks.methods) {
      nlohmann::json rel{{"essential", ms.relative.essential}, {"undefined", ms.relative.undefined}};
      rel["ratio"] = ms.relative.ratio ? nlohmann::json(*ms.relative.ratio) : nlohmann::json(nullptr);
      auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
      kj["methods"].push_back({{"method", to_string(ms.method)},
                               {"msfe", num(ms.msfe)},
                               {"mafe", num(ms.mafe)},
                               {"msfe_rank", ms.msfe_rank},
                               {"mafe_rank", ms.mafe_rank},
                               {"relative_risk", rel},
                               {"msfe_reps", ms.msfe_reps},
                               {"mafe_reps", ms.mafe_reps}});
    }
    if (config.record_timings) {
      auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
      kj["timings"] = {{"2steps_s", num(ks.two_steps_seconds)},
                       {"1step_s", num(ks.one_step_seconds)},
                       {"ratio", num(ks.time_ratio())}};
    }
    out["results"].push_back(std::move(kj));
  }
  out["failures"] = nlohmann::json::array();
  for (const auto& f : failures) out["failures"].push_back({{"replication", f.replication}, {"message", f.message}});
  out["failure_count"] = failures.size();
  return out;
}

std::string EvalReport::to_markdown() const {
  std::ostringstream os;
  auto header = [&](const std::string& title) {
    os << "### " << title << " (" << dataset << ", n = " << n << ", p = " << p << ", D = " << config.reps
       << ", M = " << config.trees << ")\n\n| trees |";
    for (Method m : kBenchMethods) os << ' ' << method_label(m) << " |";
    os << "\n|---|";
    for (std::size_t i = 0; i < kBenchMethods.size(); ++i) os << "---:|";
    os << '\n';
  };
  auto table = [&](const std::string& title, bool squared) {
    header(title);
    for (const KindSummary& ks : kinds) {
      os << "| " << to_string(ks.kind) << " |";
      for (const MethodSummary& ms : ks.methods) {
        os << ' ' << fmt(squared ? ms.msfe : ms.mafe) << "<sup>" << (squared ? ms.msfe_rank : ms.mafe_rank)
           << "</sup> |";
      }
      os << '\n';
    }
    os << '\n';
  };
  table("MSFE", true);
  table("MAFE", false);

  header("Relative risk vs 2steps-WRF_opt");
  for (const KindSummary& ks : kinds) {
    os << "| " << to_string(ks.kind) << " |";
    for (const MethodSummary& ms : ks.methods) {
      if (ms.relative.ratio) {
        os << ' ' << fmt(*ms.relative.ratio) << (ms.relative.essential ? "*" : "") << " |";
      } else {
        os << " n/a |";
      }
    }
    os << '\n';
  }
  os << "\n\\* outside (0.95, 1.05)\n\n";

  if (config.record_timings) {
    os << "### Optimiser time per replication (seconds)\n\n| trees | 2steps | 1step | ratio |\n|---|---:|---:|---:|\n";
    for (const KindSummary& ks : kinds) {
      os << "| " << to_string(ks.kind) << " | " << fmt(ks.two_steps_seconds, 4) << " | "
         << fmt(ks.one_step_seconds, 4) << " | " << fmt(ks.time_ratio(), 2) << " |\n";
    }
    os << '\n';
  }
  if (!failures.empty()) {
    os << "Failed replications: " << failures.size() << '\n';
    for (const auto& f : failures) os << "- " << f.replication << ": " << f.message << '\n';
  }
  return os.str();
}

}  // namespace owrf
