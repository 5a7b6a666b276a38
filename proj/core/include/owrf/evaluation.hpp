#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "owrf/criteria.hpp"
#include "owrf/dataset.hpp"
#include "owrf/forest.hpp"
#include "owrf/metrics.hpp"
#include "owrf/oob_weights.hpp"
#include "owrf/qp.hpp"
#include "owrf/tree.hpp"

namespace owrf {

inline constexpr int kReportSchemaVersion = 1;

/// Report column order.
inline constexpr std::array<Method, 5> kBenchMethods{Method::Rf, Method::TwoSteps, Method::OneStep,
                                                     Method::Wrf, Method::Crf};

struct BenchConfig {
  std::size_t trees = 100;
  std::optional<std::size_t> q;         // default ceil(p/3)
  std::optional<std::size_t> min_node;  // default round(sqrt(n_train)) for CART, 5 for SUT
  std::vector<TreeKind> kinds{TreeKind::Cart};
  std::size_t reps = 50;
  std::uint64_t seed = 1;
  std::array<double, 3> ratios{0.5, 0.3, 0.2};
  std::vector<double> lambda_grid{0.5, 1.0, 2.0, 3.0, 5.0};
  WrfForm wrf_form = WrfForm::InversePower;
  std::size_t importance_trees = 100;
  unsigned threads = 0;  // 0 = all cores
  bool record_timings = true;

  void validate() const;
  [[nodiscard]] nlohmann::json to_json() const;
};

/// Weights of every method on one forest, with optimiser reports and timings.
struct Weightings {
  std::map<Method, WeightVector> weights;
  std::optional<SolveReport> two_steps;
  std::optional<SolveReport> one_step;
  double lambda = 0.0;
  double two_steps_seconds = 0.0;
  double one_step_seconds = 0.0;
};

/// Computes all five weightings on the same trees and hat matrices. The wRF exponent
/// is chosen from `lambda_grid` by validation MSFE when a validation set is given,
/// otherwise the first grid value is used. Each optimiser is timed on its own.
Weightings compute_weightings(const Forest& forest, const Dataset& train, const CriterionContext& ctx,
                              const std::vector<double>& lambda_grid, WrfForm form,
                              const Dataset* validation = nullptr);

/// Per-method forecast errors of one replication for one tree kind.
struct ReplicationResult {
  TreeKind kind = TreeKind::Cart;
  std::map<Method, double> msfe;
  std::map<Method, double> mafe;
  double two_steps_seconds = 0.0;
  double one_step_seconds = 0.0;
  double lambda = 0.0;
  std::size_t min_node = 0;
  std::size_t q = 0;
};

/// Replication d: split, fit the SUT probability sequence on the validation rows, grow a
/// forest per tree kind on the training rows, weight it five ways and score the test rows.
std::vector<ReplicationResult> run_replication(const Dataset& data, const BenchConfig& config,
                                               std::size_t d, unsigned threads = 1);

struct MethodSummary {
  Method method = Method::Rf;
  double msfe = 0.0;
  double mafe = 0.0;
  std::size_t msfe_rank = 0;
  std::size_t mafe_rank = 0;
  RelativeRisk relative;  // MSFE over the 2steps MSFE
  std::vector<double> msfe_reps;
  std::vector<double> mafe_reps;
};

struct KindSummary {
  TreeKind kind = TreeKind::Cart;
  std::vector<MethodSummary> methods;  // kBenchMethods order
  std::size_t completed = 0;
  double two_steps_seconds = 0.0;  // mean per replication
  double one_step_seconds = 0.0;
  std::vector<double> lambdas;
  std::size_t min_node = 0;
  std::size_t q = 0;

  [[nodiscard]] const MethodSummary& at(Method m) const;
  [[nodiscard]] double time_ratio() const;
};

struct ReplicationFailure {
  std::size_t replication = 0;
  std::string message;
};

struct EvalReport {
  std::string dataset;
  std::size_t n = 0;
  std::size_t p = 0;
  BenchConfig config;
  std::vector<KindSummary> kinds;
  std::vector<ReplicationFailure> failures;

  [[nodiscard]] const KindSummary& at(TreeKind kind) const;
  [[nodiscard]] nlohmann::json to_json() const;
  /// One row per tree kind, MSFE with rank superscripts, then MAFE and timing tables.
  [[nodiscard]] std::string to_markdown() const;
};

/// Runs all replications (in parallel when threads allow) and aggregates them.
/// Solver or data errors inside a replication are recorded as failures.
EvalReport run_benchmark(const Dataset& data, const BenchConfig& config, const std::string& name = "dataset");

}  // namespace owrf
