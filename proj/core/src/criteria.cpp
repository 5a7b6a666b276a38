#include "owrf/criteria.hpp"

#include "owrf/error.hpp"

namespace owrf {

namespace {

void check_weights(const CriterionContext& ctx, const Eigen::VectorXd& w) {
  if (static_cast<std::size_t>(w.size()) != ctx.trees()) throw DimensionError("weight length != tree count");
}

}  // namespace

CriterionContext CriterionContext::from_parts(Eigen::VectorXd y, Eigen::MatrixXd residuals,
                                              Eigen::MatrixXd diagonals) {
  if (residuals.rows() != y.size() || diagonals.rows() != y.size() ||
      residuals.cols() != diagonals.cols() || residuals.cols() < 1) {
    throw DimensionError("criterion context parts have inconsistent shapes");
  }
  CriterionContext ctx;
  ctx.y = std::move(y);
  ctx.residuals = std::move(residuals);
  ctx.diagonals = std::move(diagonals);
  ctx.traces = ctx.diagonals.colwise().sum().transpose();
  ctx.gram = ctx.residuals.transpose() * ctx.residuals;
  return ctx;
}

CriterionContext CriterionContext::from_hats(const Eigen::VectorXd& y, HatList hats) {
  if (!hats || hats->empty()) throw DimensionError("no hat matrices");
  const Eigen::Index n = y.size();
  const auto m = static_cast<Eigen::Index>(hats->size());
  Eigen::MatrixXd residuals(n, m), diagonals(n, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const HatMatrix& hat = (*hats)[static_cast<std::size_t>(k)];
    if (hat.size() != n) throw DimensionError("hat matrix size != response length");
    residuals.col(k) = y - hat.apply(y);
    diagonals.col(k) = hat.diag();
  }
  CriterionContext ctx = from_parts(y, std::move(residuals), std::move(diagonals));
  ctx.hats = std::move(hats);
  return ctx;
}

CriterionContext CriterionContext::from_forest(const Forest& forest, const Dataset& train) {
  forest.check();
  if (forest.hats) return from_hats(train.y(), forest.hats);
  const Eigen::Index n = static_cast<Eigen::Index>(train.rows());
  const auto m = static_cast<Eigen::Index>(forest.size());
  Eigen::MatrixXd residuals(n, m), diagonals(n, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const RegressionTree& tree = forest.trees[static_cast<std::size_t>(k)];
    residuals.col(k) = train.y() - tree.predict(train.x());
    diagonals.col(k) = hat_diagonal(tree, train);
  }
  return from_parts(train.y(), std::move(residuals), std::move(diagonals));
}

double criterion_c_prime(const CriterionContext& ctx, const Eigen::VectorXd& w) {
  check_weights(ctx, w);
  const Eigen::VectorXd r = ctx.residuals * w;
  const Eigen::VectorXd d = ctx.diagonals * w;
  return r.squaredNorm() + 2.0 * (r.array().square() * d.array()).sum();
}

Eigen::VectorXd criterion_c_prime_gradient(const CriterionContext& ctx, const Eigen::VectorXd& w) {
  check_weights(ctx, w);
  const Eigen::VectorXd r = ctx.residuals * w;
  const Eigen::VectorXd d = ctx.diagonals * w;
  const Eigen::VectorXd rd = (r.array() * d.array()).matrix();
  const Eigen::VectorXd rr = r.array().square().matrix();
  return 2.0 * ctx.residuals.transpose() * (r + 2.0 * rd) + 2.0 * ctx.diagonals.transpose() * rr;
}

double criterion_c_zero(const CriterionContext& ctx, const Eigen::VectorXd& w, double sigma2) {
  check_weights(ctx, w);
  if (sigma2 < 0.0) throw DomainError("sigma2 must be >= 0");
  return (ctx.residuals * w).squaredNorm() + 2.0 * sigma2 * ctx.traces.dot(w);
}

double criterion_c_dprime(const CriterionContext& ctx, const Eigen::VectorXd& w,
                          const Eigen::VectorXd& e_tilde) {
  check_weights(ctx, w);
  if (static_cast<std::size_t>(e_tilde.size()) != ctx.rows()) throw DimensionError("e_tilde length != n");
  const Eigen::VectorXd d = ctx.diagonals * w;
  return (ctx.residuals * w).squaredNorm() + 2.0 * e_tilde.array().square().matrix().dot(d);
}

double sigma2_equal_weights(const CriterionContext& ctx) {
  const Eigen::VectorXd w0 =
      Eigen::VectorXd::Constant(static_cast<Eigen::Index>(ctx.trees()), 1.0 / double(ctx.trees()));
  return (ctx.residuals * w0).squaredNorm() / double(ctx.rows());
}

QuadraticForm c_zero_form(const CriterionContext& ctx, double sigma2) {
  if (sigma2 < 0.0) throw DomainError("sigma2 must be >= 0");
  return {ctx.gram, 2.0 * sigma2 * ctx.traces};
}

QuadraticForm c_dprime_form(const CriterionContext& ctx, const Eigen::VectorXd& e_tilde) {
  if (static_cast<std::size_t>(e_tilde.size()) != ctx.rows()) throw DimensionError("e_tilde length != n");
  return {ctx.gram, 2.0 * ctx.diagonals.transpose() * e_tilde.array().square().matrix()};
}

}  // namespace owrf
