#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "owrf/forest.hpp"
#include "owrf/tree.hpp"

namespace owrf::cli {

/// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailures = 1;  // run finished but some replications failed
inline constexpr int kExitError = 2;     // bad input, configuration or IO

struct RunConfig {
  std::string subcommand;
  std::string data;      // CSV path
  std::string manifest;  // alternative to `data`
  std::string target;    // response column; empty = last
  std::string model;     // model file (predict)
  Method method = Method::TwoSteps;
  std::optional<std::size_t> trees;
  std::optional<std::size_t> q;
  std::optional<std::size_t> min_leaf;
  std::vector<TreeKind> kinds{TreeKind::Cart};
  std::uint64_t seed = 1;
  std::size_t reps = 50;
  std::string out;  // empty = stdout
  std::optional<double> lambda;
  std::vector<double> lambda_grid{0.5, 1.0, 2.0, 3.0, 5.0};
  std::string format = "json";  // json | md
  unsigned threads = 0;
  bool timings = true;
  // simulate
  std::vector<std::size_t> n_values{200, 500, 1000};
  std::size_t p = 5;
  std::string mean = "linear";
  std::string noise = "homo";
  double sigma = 1.0;

  /// Throws InputError for non-positive numeric fields or unknown formats.
  void validate() const;
};

/// Each command writes its JSON (or markdown) to config.out, or to `out` when no path
/// is set, and returns an exit code.
int cmd_fit(const RunConfig& config, std::ostream& out);
int cmd_predict(const RunConfig& config, std::ostream& out);
int cmd_bench(const RunConfig& config, std::ostream& out);
int cmd_simulate(const RunConfig& config, std::ostream& out);

/// Dispatches on config.subcommand; library errors become kExitError with a message on `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace owrf::cli
