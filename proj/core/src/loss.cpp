#include "owrf/loss.hpp"

#include <algorithm>

#include "owrf/error.hpp"

namespace owrf {

Eigen::MatrixXd fitted_values(const std::vector<HatMatrix>& hats, const Eigen::VectorXd& y) {
  if (hats.empty()) throw DimensionError("no hat matrices");
  Eigen::MatrixXd fits(y.size(), static_cast<Eigen::Index>(hats.size()));
  for (std::size_t m = 0; m < hats.size(); ++m) fits.col(static_cast<Eigen::Index>(m)) = hats[m].apply(y);
  return fits;
}

HatMatrix::Sparse combined_hat(const std::vector<HatMatrix>& hats, const Eigen::VectorXd& w) {
  if (hats.empty() || static_cast<std::size_t>(w.size()) != hats.size()) {
    throw DimensionError("weight length != hat count");
  }
  HatMatrix::Sparse out = w(0) * hats[0].matrix();
  for (std::size_t m = 1; m < hats.size(); ++m) out += w(static_cast<Eigen::Index>(m)) * hats[m].matrix();
  out.prune(0.0);
  return out;
}

double loss_ln(const Eigen::MatrixXd& fits, const Eigen::VectorXd& w, const Eigen::VectorXd& mu) {
  if (fits.cols() != w.size() || fits.rows() != mu.size()) throw DimensionError("loss_ln shape mismatch");
  return (fits * w - mu).squaredNorm();
}

double loss_ln(const std::vector<HatMatrix>& hats, const Eigen::VectorXd& y, const Eigen::VectorXd& w,
               const Eigen::VectorXd& mu) {
  return loss_ln(fitted_values(hats, y), w, mu);
}

double risk_rn(const std::vector<HatMatrix>& hats, const Eigen::VectorXd& w, const Eigen::VectorXd& mu,
               const Eigen::VectorXd& sigma2) {
  if (mu.size() != sigma2.size()) throw DimensionError("mu and sigma2 lengths differ");
  const HatMatrix::Sparse p = combined_hat(hats, w);
  if (p.rows() != mu.size()) throw DimensionError("hat size != mu length");
  const double bias = (p * mu - mu).squaredNorm();
  double variance = 0.0;
  for (Eigen::Index i = 0; i < p.outerSize(); ++i) {
    for (HatMatrix::Sparse::InnerIterator it(p, i); it; ++it) {
      variance += it.value() * it.value() * sigma2(it.col());
    }
  }
  return bias + variance;
}

QuadraticForm loss_form(const Eigen::MatrixXd& fits, const Eigen::VectorXd& mu) {
  if (fits.rows() != mu.size()) throw DimensionError("fits rows != mu length");
  // On the simplex fits*w - mu = (fits - mu 1')w, so L_n is a pure quadratic form.
  const Eigen::MatrixXd a = fits.colwise() - mu;
  return {a.transpose() * a, Eigen::VectorXd::Zero(fits.cols())};
}

QuadraticForm risk_form(const std::vector<HatMatrix>& hats, const Eigen::VectorXd& mu,
                        const Eigen::VectorXd& sigma2) {
  if (hats.empty()) throw DimensionError("no hat matrices");
  const auto m = static_cast<Eigen::Index>(hats.size());
  Eigen::MatrixXd bias(mu.size(), m);
  std::vector<HatMatrix::Sparse> scaled;
  scaled.reserve(hats.size());
  const Eigen::VectorXd sd = sigma2.cwiseSqrt();
  for (Eigen::Index k = 0; k < m; ++k) {
    const HatMatrix& h = hats[static_cast<std::size_t>(k)];
    bias.col(k) = h.apply(mu) - mu;
    scaled.push_back(h.matrix() * sd.asDiagonal());
  }
  Eigen::MatrixXd g = bias.transpose() * bias;
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = a; b < m; ++b) {
      const double v = scaled[static_cast<std::size_t>(a)].cwiseProduct(scaled[static_cast<std::size_t>(b)]).sum();
      g(a, b) += v;
      if (a != b) g(b, a) += v;
    }
  }
  return {g, Eigen::VectorXd::Zero(m)};
}

std::pair<WeightVector, double> infeasible_best(const Eigen::MatrixXd& fits, const Eigen::VectorXd& mu) {
  const QuadraticForm form = loss_form(fits, mu);
  SolveReport report = solve_quadratic_simplex(form.g, form.b);
  // Report the loss evaluated directly rather than through the Gram form.
  const double loss = loss_ln(fits, report.w.values(), mu);
  return {std::move(report.w), loss};
}

std::pair<WeightVector, double> infeasible_best(const std::vector<HatMatrix>& hats,
                                                const Eigen::VectorXd& y, const Eigen::VectorXd& mu) {
  return infeasible_best(fitted_values(hats, y), mu);
}

double criterion_c_infeasible(const CriterionContext& ctx, const Eigen::VectorXd& w,
                              const Eigen::VectorXd& true_errors) {
  return criterion_c_dprime(ctx, w, true_errors);
}

}  // namespace owrf
