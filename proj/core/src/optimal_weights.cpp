#include "owrf/optimal_weights.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "owrf/simplex.hpp"

namespace owrf {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double relative_gap(double f, const Eigen::VectorXd& w, const Eigen::VectorXd& grad) {
  const double scale = std::max({1.0, std::abs(f), grad.cwiseAbs().maxCoeff()});
  return frank_wolfe_gap(w, grad) / scale;
}

// C'(w + s) - C'(w) from the increments of r and d; avoids cancelling two large values.
double c_prime_change(const CriterionContext& ctx, const Eigen::VectorXd& w, const Eigen::VectorXd& s) {
  const Eigen::VectorXd r = ctx.residuals * w;
  const Eigen::VectorXd d = ctx.diagonals * w;
  const Eigen::VectorXd dr = ctx.residuals * s;
  const Eigen::VectorXd dd = ctx.diagonals * s;
  const Eigen::ArrayXd sq = dr.array() * (2.0 * r.array() + dr.array());
  return (sq * (1.0 + 2.0 * (d + dd).array()) + 2.0 * r.array().square() * dd.array()).sum();
}

}  // namespace

TwoStepResult solve_two_steps_detailed(const CriterionContext& ctx, const QpOptions& options) {
  TwoStepResult out{0.0, SolveReport{WeightVector::equal(ctx.trees()), 0.0, 0, false, 0.0, {}}, {},
                    SolveReport{WeightVector::equal(ctx.trees()), 0.0, 0, false, 0.0, {}}};
  out.sigma2 = sigma2_equal_weights(ctx);
  const QuadraticForm first = c_zero_form(ctx, out.sigma2);
  out.first = solve_quadratic_simplex(first.g, first.b, options);
  out.first.method = "c0";
  out.e_tilde = ctx.residuals * out.first.w.values();
  const QuadraticForm second = c_dprime_form(ctx, out.e_tilde);
  out.second = solve_quadratic_simplex(second.g, second.b, options);
  out.second.method = "2steps";
  return out;
}

SolveReport solve_two_steps(const CriterionContext& ctx, const QpOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  TwoStepResult detail = solve_two_steps_detailed(ctx, options);
  SolveReport report = std::move(detail.second);
  report.iterations += detail.first.iterations;
  report.converged = report.converged && detail.first.converged;
  report.wall_time = seconds_since(start);
  return report;
}

SolveReport minimize_c_prime(const CriterionContext& ctx, const Eigen::VectorXd& start,
                             const OneStepOptions& options) {
  const auto clock_start = std::chrono::steady_clock::now();
  Eigen::VectorXd w = project_to_simplex(start);
  double f = criterion_c_prime(ctx, w);
  Eigen::VectorXd grad = criterion_c_prime_gradient(ctx, w);
  double step = 1.0 / std::max(1e-300, grad.cwiseAbs().maxCoeff());
  bool converged = ctx.trees() == 1;
  std::size_t it = 0;

  for (; it < options.max_iterations && !converged; ++it) {
    if (relative_gap(f, w, grad) < options.tolerance) {
      converged = true;
      break;
    }
    double shift = 0.0;
    {
      Eigen::Index free = 0;
      for (Eigen::Index m = 0; m < w.size(); ++m) {
        if (w(m) > 0.0) {
          shift += grad(m);
          ++free;
        }
      }
      shift /= double(std::max<Eigen::Index>(free, 1));
    }
    Eigen::VectorXd trial;
    double f_trial = f;
    bool accepted = false;
    for (int backtrack = 0; backtrack < 60; ++backtrack) {
      trial = project_to_simplex(w - step * grad);
      // Rounding leaves sum(s) ~ 1e-17 off zero; against a large common gradient component
      // that drift swamps the true decrease near a minimum, so measure along the simplex.
      const Eigen::VectorXd step_vec = trial - w;
      const double drift = step_vec.sum();
      const double change = c_prime_change(ctx, w, step_vec) - shift * drift;
      f_trial = f + change;
      if (change <= options.armijo * (grad.dot(step_vec) - shift * drift)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    const Eigen::VectorXd s = trial - w;
    if (s.cwiseAbs().maxCoeff() == 0.0) {
      converged = relative_gap(f, w, grad) < options.tolerance;
      break;
    }
    const Eigen::VectorXd grad_trial = criterion_c_prime_gradient(ctx, trial);
    const double sy = s.dot(grad_trial - grad);
    step = sy > 0.0 ? s.squaredNorm() / sy : step * 2.0;
    w = std::move(trial);
    f = f_trial;
    grad = grad_trial;
  }
  if (!converged) converged = relative_gap(f, w, grad) < options.tolerance;
  f = criterion_c_prime(ctx, w);

  // Snapping can only perturb the objective by rounding-level amounts; keep whichever is lower.
  const Eigen::VectorXd snapped = snap_to_simplex(w);
  const double f_snapped = criterion_c_prime(ctx, snapped);
  if (f_snapped <= f) {
    w = snapped;
    f = f_snapped;
  }
  SolveReport report{WeightVector(w), f, it, converged, 0.0, "1step"};
  report.wall_time = seconds_since(clock_start);
  return report;
}

SolveReport solve_one_step(const CriterionContext& ctx, const SolveReport& two_steps,
                           const OneStepOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const Eigen::VectorXd w0 =
      Eigen::VectorXd::Constant(static_cast<Eigen::Index>(ctx.trees()), 1.0 / double(ctx.trees()));
  SolveReport from_equal = minimize_c_prime(ctx, w0, options);
  SolveReport from_two = minimize_c_prime(ctx, two_steps.w.values(), options);
  const std::size_t iterations = from_equal.iterations + from_two.iterations;
  SolveReport best = from_two.objective < from_equal.objective ? std::move(from_two) : std::move(from_equal);
  best.iterations = iterations;
  best.wall_time = seconds_since(start);
  return best;
}

SolveReport solve_one_step(const CriterionContext& ctx, const OneStepOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const SolveReport two = solve_two_steps(ctx, options.qp);
  SolveReport best = solve_one_step(ctx, two, options);
  best.wall_time = seconds_since(start);
  return best;
}

}  // namespace owrf
