#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "owrf/dataset.hpp"
#include "owrf/random.hpp"

namespace owrf {

/// Named regression functions on [0,1]^p.
///   Linear    mu = sum_j (j + 1) x_j
///   Friedman  mu = 10 sin(pi x1 x2) + 20 (x3 - 0.5)^2 + 10 x4 + 5 x5   (p >= 5)
///   Step      mu = 10 [x1 > 0.5] + 5 [x2 > 0.3]
enum class MeanFunction { Linear, Friedman, Step };
/// Homoscedastic: sigma_i = sigma. Heteroscedastic: sigma_i = sigma (1 + |x_i1|).
enum class NoiseKind { Homoscedastic, Heteroscedastic };

std::string to_string(MeanFunction f);
MeanFunction mean_function_from_string(const std::string& name);
std::string to_string(NoiseKind k);
NoiseKind noise_kind_from_string(const std::string& name);

struct SyntheticSpec {
  std::size_t n = 200;
  std::size_t p = 5;
  MeanFunction mean = MeanFunction::Linear;
  NoiseKind noise = NoiseKind::Homoscedastic;
  double sigma = 1.0;
  std::uint64_t seed = 1;

  void validate() const;
};

/// A sample with its ground truth: conditional mean and per-row noise variance.
struct SyntheticData {
  Dataset data;
  Eigen::VectorXd mu;
  Eigen::VectorXd sigma2;
};

Eigen::VectorXd mean_values(MeanFunction f, const Eigen::MatrixXd& x);

/// X ~ U[0,1]^p, y = mu(X) + e with independent Gaussian e_i ~ N(0, sigma_i^2).
SyntheticData generate(const SyntheticSpec& spec);

/// mu + fresh Gaussian noise with the given variances.
Eigen::VectorXd draw_response(const Eigen::VectorXd& mu, const Eigen::VectorXd& sigma2, Rng& rng);

}  // namespace owrf
