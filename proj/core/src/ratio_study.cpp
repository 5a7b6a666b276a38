#include "owrf/ratio_study.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "owrf/criteria.hpp"
#include "owrf/error.hpp"
#include "owrf/forest.hpp"
#include "owrf/grow.hpp"
#include "owrf/loss.hpp"
#include "owrf/optimal_weights.hpp"
#include "owrf/random.hpp"

namespace owrf {

void RatioStudyConfig::validate() const {
  if (n_values.empty()) throw InputError("ratio study needs at least one sample size");
  if (trees < 1 || reps < 1) throw InputError("ratio study needs trees >= 1 and reps >= 1");
  SyntheticSpec{n_values.front(), p, mean, noise, sigma, seed}.validate();
}

nlohmann::json RatioStudyConfig::to_json() const {
  return {{"n_values", n_values},
          {"trees", trees},
          {"tree_kind", to_string(kind)},
          {"reps", reps},
          {"p", p},
          {"mean", to_string(mean)},
          {"noise", to_string(noise)},
          {"sigma", sigma},
          {"q", q ? nlohmann::json(*q) : nlohmann::json(default_q(p))},
          {"min_node", min_node ? nlohmann::json(*min_node) : nlohmann::json(nullptr)},
          {"seed", seed}};
}

Summary summarize(std::vector<double> values) {
  if (values.empty()) throw DimensionError("summary of an empty sample");
  std::sort(values.begin(), values.end());
  auto quantile = [&](double prob) {
    const double h = (double(values.size()) - 1.0) * prob;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - double(lo)) * (values[hi] - values[lo]);
  };
  return {quantile(0.5), quantile(0.25), quantile(0.75), values.front(), values.back()};
}

namespace {

nlohmann::json summary_json(const std::vector<double>& v) {
  if (v.empty()) return nullptr;
  const Summary s = summarize(v);
  return {{"median", s.median}, {"q1", s.q1}, {"q3", s.q3}, {"iqr", s.iqr()}, {"min", s.min}, {"max", s.max}};
}

}  // namespace

nlohmann::json RatioRow::to_json() const {
  return {{"n", n},
          {"loss_ratio",
           {{"2steps", summary_json(two_steps)}, {"1step", summary_json(one_step)}, {"rf", summary_json(equal)}}},
          {"risk_ratio_estimated",
           {{"2steps", summary_json(risk_two_steps)}, {"1step", summary_json(risk_one_step)}}},
          {"replications", two_steps.size()},
          {"descent_holds", descent_holds},
          {"diagnostics",
           {{"min_leaf_size", min_leaf_size},
            {"max_hat_diagonal", max_hat_diagonal},
            {"condition5_statistic", condition5_statistic}}}};
}

double RatioReport::min_ratio() const {
  double lo = std::numeric_limits<double>::infinity();
  for (const RatioRow& row : rows) {
    for (const auto* v : {&row.two_steps, &row.one_step, &row.equal}) {
      for (double r : *v) lo = std::min(lo, r);
    }
  }
  return lo;
}

nlohmann::json RatioReport::to_json() const {
  nlohmann::json out{{"schema_version", 1}, {"kind", "ratio_report"}, {"config", config.to_json()}};
  out["trees"] = config.trees;
  out["rows"] = nlohmann::json::array();
  for (const RatioRow& row : rows) out["rows"].push_back(row.to_json());
  out["min_ratio"] = min_ratio();
  return out;
}

std::string RatioReport::to_text() const {
  std::ostringstream os;
  os << "Loss ratio L_n(w) / inf L_n(w)  (" << to_string(config.kind) << " trees, M = " << config.trees
     << ", reps = " << config.reps << ", mean = " << to_string(config.mean) << ")\n";
  os << std::setw(7) << "n" << std::setw(14) << "2steps med" << std::setw(10) << "IQR" << std::setw(14)
     << "1step med" << std::setw(10) << "IQR" << std::setw(12) << "rf med" << std::setw(16)
     << "risk 2steps*" << std::setw(11) << "min leaf" << std::setw(11) << "max Pii" << std::setw(12)
     << "sqrt(n)/l" << '\n';
  os << std::fixed;
  for (const RatioRow& row : rows) {
    const Summary two = summarize(row.two_steps);
    const Summary one = summarize(row.one_step);
    const Summary eq = summarize(row.equal);
    const Summary risk = summarize(row.risk_two_steps);
    os << std::setw(7) << row.n << std::setprecision(4) << std::setw(14) << two.median << std::setw(10)
       << two.iqr() << std::setw(14) << one.median << std::setw(10) << one.iqr() << std::setw(12) << eq.median
       << std::setw(16) << risk.median << std::setprecision(1) << std::setw(11) << row.min_leaf_size
       << std::setprecision(3) << std::setw(11) << row.max_hat_diagonal << std::setw(12)
       << row.condition5_statistic << '\n';
  }
  os << "* estimated: conditional risk given the grown trees and the true noise variances\n";
  return os.str();
}

RatioReport optimality_ratio_study(const RatioStudyConfig& config) {
  config.validate();
  RatioReport report{config, {}};
  for (std::size_t ni = 0; ni < config.n_values.size(); ++ni) {
    const std::size_t n = config.n_values[ni];
    RatioRow row;
    row.n = n;
    row.min_leaf_size = std::numeric_limits<double>::infinity();
    for (std::size_t rep = 0; rep < config.reps; ++rep) {
      const std::uint64_t rep_seed = mix_seed(config.seed, ni * 1000003ULL + rep);
      const SyntheticData sim =
          generate(SyntheticSpec{n, config.p, config.mean, config.noise, config.sigma, rep_seed});

      GrowConfig grow;
      grow.kind = config.kind;
      grow.q = config.q.value_or(default_q(config.p));
      grow.min_node = config.min_node.value_or(default_min_node(config.kind, n));
      if (config.kind == TreeKind::Sut) grow.prob_seq = std::vector<double>(config.p, 1.0 / double(config.p));

      Forest forest = grow_forest(sim.data, grow, config.trees, mix_seed(rep_seed, 1), config.threads);
      attach_hats(forest, sim.data, config.threads);
      const CriterionContext ctx = CriterionContext::from_hats(sim.data.y(), forest.hats);

      const TwoStepResult two = solve_two_steps_detailed(ctx);
      const SolveReport one = solve_one_step(ctx, two.second);
      const Eigen::VectorXd w0 = WeightVector::equal(config.trees).values();

      const Eigen::MatrixXd fits = fitted_values(*forest.hats, sim.data.y());
      const auto [best_w, best_loss] = infeasible_best(fits, sim.mu);
      (void)best_w;
      if (!(best_loss > 0.0)) continue;
      row.two_steps.push_back(loss_ln(fits, two.second.w.values(), sim.mu) / best_loss);
      row.one_step.push_back(loss_ln(fits, one.w.values(), sim.mu) / best_loss);
      row.equal.push_back(loss_ln(fits, w0, sim.mu) / best_loss);

      const QuadraticForm risk = risk_form(*forest.hats, sim.mu, sim.sigma2);
      const SolveReport best_risk = solve_quadratic_simplex(risk.g, risk.b);
      if (best_risk.objective > 0.0) {
        row.risk_two_steps.push_back(risk_rn(*forest.hats, two.second.w.values(), sim.mu, sim.sigma2) /
                                     best_risk.objective);
        row.risk_one_step.push_back(risk_rn(*forest.hats, one.w.values(), sim.mu, sim.sigma2) /
                                    best_risk.objective);
      }

      if (criterion_c_dprime(ctx, two.second.w.values(), two.e_tilde) <=
          criterion_c_dprime(ctx, w0, two.e_tilde) + 1e-10) {
        ++row.descent_holds;
      }
      for (std::size_t m = 0; m < forest.size(); ++m) {
        row.min_leaf_size = std::min(row.min_leaf_size, forest.trees[m].min_leaf_size());
        row.max_hat_diagonal = std::max(row.max_hat_diagonal, (*forest.hats)[m].diag().maxCoeff());
      }
    }
    row.condition5_statistic = std::sqrt(double(n)) / row.min_leaf_size;
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace owrf
