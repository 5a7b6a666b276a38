#include "owrf/qp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <vector>

#include "owrf/error.hpp"
#include "owrf/simplex.hpp"

namespace owrf {

nlohmann::json SolveReport::to_json() const {
  const Eigen::VectorXd& v = w.values();
  return {{"method", method},
          {"weights", std::vector<double>(v.data(), v.data() + v.size())},
          {"objective", objective},
          {"iterations", iterations},
          {"converged", converged},
          {"wall_time_s", wall_time}};
}

double quadratic_objective(const Eigen::MatrixXd& g, const Eigen::VectorXd& b,
                           const Eigen::VectorXd& w) {
  return w.dot(g * w) + b.dot(w);
}

namespace {

double relative_gap(const Eigen::MatrixXd& g, const Eigen::VectorXd& b, const Eigen::VectorXd& w) {
  const Eigen::VectorXd grad = 2.0 * g * w + b;
  const double scale = std::max({1.0, std::abs(quadratic_objective(g, b, w)), grad.cwiseAbs().maxCoeff()});
  return frank_wolfe_gap(w, grad) / scale;
}

struct ActiveSetResult {
  Eigen::VectorXd w;
  std::size_t iterations = 0;
  bool finished = false;
};

// Primal active-set method on the bound constraints w >= 0 with the equality sum w = 1
// kept in every subproblem. Starts from the best vertex (every other bound active), so
// the KKT systems stay as small as the support of the solution.
ActiveSetResult active_set(const Eigen::MatrixXd& g, const Eigen::VectorXd& b, double ridge) {
  const Eigen::Index m = g.rows();
  const double shift = ridge * std::max(1.0, g.diagonal().cwiseAbs().maxCoeff());
  Eigen::MatrixXd h = 2.0 * g;
  h.diagonal().array() += 2.0 * shift;

  ActiveSetResult out;
  Eigen::Index vertex = 0;
  (g.diagonal() + b).minCoeff(&vertex);
  out.w = Eigen::VectorXd::Zero(m);
  out.w(vertex) = 1.0;
  std::vector<bool> active(static_cast<std::size_t>(m), true);
  active[static_cast<std::size_t>(vertex)] = false;
  const std::size_t max_iter = 50 * static_cast<std::size_t>(m) + 100;

  bool on_face_minimum = true;
  for (; out.iterations < max_iter; ++out.iterations) {
    const Eigen::VectorXd grad = h * out.w + b;
    std::vector<Eigen::Index> free;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (!active[static_cast<std::size_t>(i)]) free.push_back(i);
    }
    const auto k = static_cast<Eigen::Index>(free.size());

    Eigen::VectorXd step;
    if (!on_face_minimum) {
      Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(k + 1, k + 1);
      Eigen::VectorXd rhs(k + 1);
      for (Eigen::Index r = 0; r < k; ++r) {
        for (Eigen::Index c = 0; c < k; ++c) kkt(r, c) = h(free[r], free[c]);
        kkt(r, k) = 1.0;
        kkt(k, r) = 1.0;
        rhs(r) = -grad(free[r]);
      }
      rhs(k) = 0.0;
      const Eigen::VectorXd sol = kkt.partialPivLu().solve(rhs);
      if (!sol.allFinite()) return out;
      step = sol.head(k);
      on_face_minimum = step.cwiseAbs().maxCoeff() <= 1e-13;
    }

    if (on_face_minimum) {
      // Stationary on the working face: the equality multiplier is the common gradient
      // value of the free coordinates; release the most violated bound, if any.
      double mu = 0.0;
      for (Eigen::Index i : free) mu += grad(i);
      mu /= double(k);
      const double tol = 1e-12 * std::max(1.0, grad.cwiseAbs().maxCoeff());
      Eigen::Index worst = -1;
      double worst_value = -tol;
      for (Eigen::Index i = 0; i < m; ++i) {
        if (!active[static_cast<std::size_t>(i)]) continue;
        const double lambda = grad(i) - mu;
        if (lambda < worst_value) {
          worst_value = lambda;
          worst = i;
        }
      }
      if (worst < 0) {
        out.finished = true;
        return out;
      }
      active[static_cast<std::size_t>(worst)] = false;
      on_face_minimum = false;
      continue;
    }

    double alpha = 1.0;
    Eigen::Index blocking = -1;
    for (Eigen::Index r = 0; r < k; ++r) {
      if (step(r) < 0.0) {
        const double ratio = -out.w(free[r]) / step(r);
        if (ratio < alpha) {
          alpha = ratio;
          blocking = free[r];
        }
      }
    }
    for (Eigen::Index r = 0; r < k; ++r) out.w(free[r]) += alpha * step(r);
    if (blocking >= 0) {
      out.w(blocking) = 0.0;
      active[static_cast<std::size_t>(blocking)] = true;
    } else {
      on_face_minimum = true;
    }
    for (Eigen::Index i = 0; i < m; ++i) out.w(i) = std::max(0.0, out.w(i));
    out.w /= out.w.sum();
  }
  return out;
}

// Accelerated projected gradient with adaptive restart.
std::size_t projected_gradient(const Eigen::MatrixXd& g, const Eigen::VectorXd& b, double lipschitz,
                               Eigen::VectorXd& w, double tolerance, std::size_t max_iter) {
  const double step = lipschitz > 0.0 ? 1.0 / lipschitz : 1.0;
  Eigen::VectorXd y = w;
  double t = 1.0;
  double f_prev = quadratic_objective(g, b, w);
  std::size_t it = 0;
  for (; it < max_iter; ++it) {
    if (relative_gap(g, b, w) < tolerance) break;
    const Eigen::VectorXd next = project_to_simplex(y - step * (2.0 * g * y + b));
    const double f_next = quadratic_objective(g, b, next);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    if (f_next > f_prev) {
      // Restart momentum from the current iterate.
      y = w;
      t = 1.0;
      continue;
    }
    y = next + ((t - 1.0) / t_next) * (next - w);
    w = next;
    t = t_next;
    f_prev = f_next;
  }
  return it;
}

}  // namespace

SolveReport solve_quadratic_simplex(const Eigen::MatrixXd& g_in, const Eigen::VectorXd& b,
                                    const QpOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const Eigen::Index m = g_in.rows();
  if (m < 1 || g_in.cols() != m || b.size() != m) throw DimensionError("QP needs square G and matching b");
  if (!g_in.allFinite() || !b.allFinite()) throw InputError("QP input has non-finite entries");
  const double g_scale = std::max(1.0, g_in.cwiseAbs().maxCoeff());
  if ((g_in - g_in.transpose()).cwiseAbs().maxCoeff() > 1e-10 * g_scale) {
    throw InputError("QP matrix is not symmetric");
  }
  const Eigen::MatrixXd g = 0.5 * (g_in + g_in.transpose());

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g, Eigen::EigenvaluesOnly);
  const double lambda_min = eig.eigenvalues().minCoeff();
  const double lambda_max = eig.eigenvalues().maxCoeff();
  if (lambda_min < -1e-8 * std::max(1.0, std::abs(lambda_max))) {
    throw InputError("QP matrix is not positive semidefinite (min eigenvalue " +
                     std::to_string(lambda_min) + ")");
  }

  Eigen::VectorXd w;
  std::size_t iterations = 0;
  if (m == 1) {
    w = Eigen::VectorXd::Ones(1);
  } else {
    bool finished = false;
    if (static_cast<std::size_t>(m) <= options.active_set_limit) {
      ActiveSetResult as = active_set(g, b, options.ridge);
      w = std::move(as.w);
      iterations = as.iterations;
      finished = as.finished;
    } else {
      w = Eigen::VectorXd::Constant(m, 1.0 / double(m));
    }
    w = snap_to_simplex(w);
    if (!finished || relative_gap(g, b, w) >= options.tolerance) {
      iterations += projected_gradient(g, b, 2.0 * std::max(0.0, lambda_max), w, options.tolerance,
                                       options.max_gradient_iterations);
      w = snap_to_simplex(w);
    }
  }

  SolveReport report{WeightVector(w), quadratic_objective(g, b, w), iterations,
                     relative_gap(g, b, w) < options.tolerance, 0.0, "qp"};
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace owrf
