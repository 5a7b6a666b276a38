#include "owrf/synthetic.hpp"

#include <cmath>
#include <numbers>

#include "owrf/error.hpp"

namespace owrf {

std::string to_string(MeanFunction f) {
  switch (f) {
    case MeanFunction::Linear: return "linear";
    case MeanFunction::Friedman: return "friedman";
    case MeanFunction::Step: return "step";
  }
  return "linear";
}

MeanFunction mean_function_from_string(const std::string& name) {
  if (name == "linear") return MeanFunction::Linear;
  if (name == "friedman") return MeanFunction::Friedman;
  if (name == "step") return MeanFunction::Step;
  throw InputError("unknown mean function '" + name + "' (expected linear, friedman or step)");
}

std::string to_string(NoiseKind k) { return k == NoiseKind::Homoscedastic ? "homo" : "hetero"; }

NoiseKind noise_kind_from_string(const std::string& name) {
  if (name == "homo") return NoiseKind::Homoscedastic;
  if (name == "hetero") return NoiseKind::Heteroscedastic;
  throw InputError("unknown noise kind '" + name + "' (expected homo or hetero)");
}

void SyntheticSpec::validate() const {
  if (n < 1 || p < 1) throw InputError("synthetic data needs n >= 1 and p >= 1");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InputError("noise sigma must be > 0");
  if (mean == MeanFunction::Friedman && p < 5) throw InputError("the Friedman mean needs p >= 5");
}

Eigen::VectorXd mean_values(MeanFunction f, const Eigen::MatrixXd& x) {
  const Eigen::Index n = x.rows();
  Eigen::VectorXd mu(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    switch (f) {
      case MeanFunction::Linear: {
        double v = 0.0;
        for (Eigen::Index j = 0; j < x.cols(); ++j) v += double(j + 1) * x(i, j);
        mu(i) = v;
        break;
      }
      case MeanFunction::Friedman:
        mu(i) = 10.0 * std::sin(std::numbers::pi * x(i, 0) * x(i, 1)) +
                20.0 * (x(i, 2) - 0.5) * (x(i, 2) - 0.5) + 10.0 * x(i, 3) + 5.0 * x(i, 4);
        break;
      case MeanFunction::Step:
        mu(i) = 10.0 * (x(i, 0) > 0.5 ? 1.0 : 0.0) +
                (x.cols() > 1 ? 5.0 * (x(i, 1) > 0.3 ? 1.0 : 0.0) : 0.0);
        break;
    }
  }
  return mu;
}

SyntheticData generate(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto n = static_cast<Eigen::Index>(spec.n);
  const auto p = static_cast<Eigen::Index>(spec.p);
  Eigen::MatrixXd x(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) x(i, j) = unit(rng);
  }
  Eigen::VectorXd mu = mean_values(spec.mean, x);
  Eigen::VectorXd sigma2(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = spec.noise == NoiseKind::Homoscedastic ? spec.sigma
                                                            : spec.sigma * (1.0 + std::abs(x(i, 0)));
    sigma2(i) = s * s;
  }
  Eigen::VectorXd y = draw_response(mu, sigma2, rng);
  return {Dataset(std::move(x), std::move(y)), std::move(mu), std::move(sigma2)};
}

Eigen::VectorXd draw_response(const Eigen::VectorXd& mu, const Eigen::VectorXd& sigma2, Rng& rng) {
  if (mu.size() != sigma2.size()) throw DimensionError("mu and sigma2 lengths differ");
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd y(mu.size());
  for (Eigen::Index i = 0; i < mu.size(); ++i) y(i) = mu(i) + std::sqrt(sigma2(i)) * gauss(rng);
  return y;
}

}  // namespace owrf
