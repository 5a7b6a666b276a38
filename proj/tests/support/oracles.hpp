#pragma once

// Independent reference computations used by the unit and acceptance tests.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "owrf/bootstrap.hpp"
#include "owrf/criteria.hpp"
#include "owrf/dataset.hpp"
#include "owrf/forest.hpp"
#include "owrf/tree.hpp"

namespace oracle {

/// X ~ U[0,1]^p, y = sum_j (j+1) x_j + N(0, noise^2), drawn with its own generator.
owrf::Dataset toy_data(std::size_t n, std::size_t p, std::uint64_t seed, double noise = 0.5);

/// Forest of `trees` trees with hat matrices attached.
owrf::Forest toy_forest(const owrf::Dataset& data, std::size_t trees, owrf::TreeKind kind,
                        std::uint64_t seed, std::size_t min_node = 3);

/// Dense hat matrix from leaf routing and bootstrap counts only:
/// P_ij = [leaf(x_i) = leaf(x_j)] h_j / sum_{k : leaf(x_k) = leaf(x_i)} h_k.
Eigen::MatrixXd dense_hat(const owrf::RegressionTree& tree, const owrf::BootstrapSample& sample,
                          const owrf::Dataset& data);

/// Minimum of f over the simplex grid {w : w_m in {0, step, 2 step, ...}, sum w = 1}.
std::pair<Eigen::VectorXd, double> grid_minimum(std::size_t m, double step,
                                                const std::function<double(const Eigen::VectorXd&)>& f);

/// Central differences with the given step, coordinate by coordinate (unconstrained).
Eigen::VectorXd central_difference(const std::function<double(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& w, double h);

/// Uniform random point of the simplex (normalised exponentials).
Eigen::VectorXd random_simplex_point(std::size_t m, std::mt19937_64& rng);

/// C'(w) computed term by term from dense hat matrices.
double c_prime_dense(const Eigen::VectorXd& y, const std::vector<Eigen::MatrixXd>& hats,
                     const Eigen::VectorXd& w);

/// Dense hat matrices of every tree in a forest via dense_hat.
std::vector<Eigen::MatrixXd> dense_hats(const owrf::Forest& forest, const owrf::Dataset& data);

}  // namespace oracle
