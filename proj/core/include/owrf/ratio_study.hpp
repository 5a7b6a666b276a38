#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "owrf/synthetic.hpp"
#include "owrf/tree.hpp"

namespace owrf {

struct RatioStudyConfig {
  std::vector<std::size_t> n_values{200, 500, 1000};
  std::size_t trees = 50;
  TreeKind kind = TreeKind::Sut;
  std::size_t reps = 20;
  std::size_t p = 5;
  MeanFunction mean = MeanFunction::Linear;
  NoiseKind noise = NoiseKind::Homoscedastic;
  double sigma = 1.0;
  std::optional<std::size_t> q;         // default ceil(p/3)
  std::optional<std::size_t> min_node;  // default per tree kind
  std::uint64_t seed = 1;
  unsigned threads = 1;

  void validate() const;
  [[nodiscard]] nlohmann::json to_json() const;
};

struct Summary {
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double min = 0.0;
  double max = 0.0;

  [[nodiscard]] double iqr() const { return q3 - q1; }
};

/// Type-7 quantile summary of a non-empty sample.
Summary summarize(std::vector<double> values);

/// Results for one sample size. Loss ratios are L_n(w) / inf L_n; risk ratios use the
/// conditional risk given the grown trees and the true noise variances (labelled
/// "estimated" in reports since the infimum of the unconditional risk is not available).
struct RatioRow {
  std::size_t n = 0;
  std::vector<double> two_steps;
  std::vector<double> one_step;
  std::vector<double> equal;
  std::vector<double> risk_two_steps;
  std::vector<double> risk_one_step;
  std::size_t descent_holds = 0;  // replications with C''(w~) <= C''(w0)
  double min_leaf_size = 0.0;     // over all trees and replications
  double max_hat_diagonal = 0.0;
  double condition5_statistic = 0.0;  // sqrt(n) / min leaf size

  [[nodiscard]] nlohmann::json to_json() const;
};

struct RatioReport {
  RatioStudyConfig config;
  std::vector<RatioRow> rows;

  /// Smallest individual loss ratio across every method, n and replication.
  [[nodiscard]] double min_ratio() const;
  [[nodiscard]] nlohmann::json to_json() const;
  [[nodiscard]] std::string to_text() const;
};

/// For each n: simulate, grow a forest, fit both optimal weightings and compare their
/// loss with the infeasible best convex combination of the same trees.
RatioReport optimality_ratio_study(const RatioStudyConfig& config);

}  // namespace owrf
