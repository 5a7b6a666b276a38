#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "owrf/criteria.hpp"
#include "owrf/qp.hpp"

namespace owrf {

/// Intermediate quantities of the two-step optimiser.
struct TwoStepResult {
  double sigma2 = 0.0;        // plug-in variance at equal weights
  SolveReport first;          // argmin C0
  Eigen::VectorXd e_tilde;    // y - P(w*) y
  SolveReport second;         // argmin C''
};

/// Minimises C0 (plug-in variance penalty), re-estimates residuals at that solution,
/// then minimises C''. The returned report is the second solve with iterations and
/// wall time accumulated over both.
SolveReport solve_two_steps(const CriterionContext& ctx, const QpOptions& options = {});
TwoStepResult solve_two_steps_detailed(const CriterionContext& ctx, const QpOptions& options = {});

struct OneStepOptions {
  std::size_t max_iterations = 5000;
  /// Stationarity threshold on the relative Frank-Wolfe gap.
  double tolerance = 1e-9;
  double armijo = 1e-4;
  QpOptions qp{};
};

/// Projected gradient with Armijo backtracking and Barzilai-Borwein trial steps on the
/// cubic C', started from `start`. Never returns a point worse than `start`.
SolveReport minimize_c_prime(const CriterionContext& ctx, const Eigen::VectorXd& start,
                             const OneStepOptions& options = {});

/// Multi-start minimisation of C' from equal weights and from the two-step solution;
/// returns the better of the two local solutions.
SolveReport solve_one_step(const CriterionContext& ctx, const OneStepOptions& options = {});
/// Same, reusing an already computed two-step solution as the second start.
SolveReport solve_one_step(const CriterionContext& ctx, const SolveReport& two_steps,
                           const OneStepOptions& options = {});

}  // namespace owrf
