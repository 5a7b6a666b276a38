#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <boost/rational.hpp>

#include "owrf/dataset.hpp"
#include "owrf/forest.hpp"

namespace owrf {

/// Mean absolute out-of-bag error of one tree; nullopt when the tree has no OOB rows.
std::optional<double> tpe_star(std::size_t tree_index, const Forest& forest, const Dataset& train);
std::vector<std::optional<double>> tpe_stars(const Forest& forest, const Dataset& train);

/// Members of the wRF family, each normalised to sum to one:
///   OneMinus      w = 1 - tPE (clamped at 0)
///   Exponential   w = exp(1 / tPE)
///   InversePower  w = tPE^(-lambda)
enum class WrfForm { OneMinus, Exponential, InversePower };

/// Trees without OOB rows take the mean error of the others. When some errors are
/// exactly zero (Exponential, InversePower), those trees split all the mass evenly.
WeightVector wrf_weights_from_errors(const std::vector<std::optional<double>>& errors, double lambda,
                                     WrfForm form = WrfForm::InversePower);
WeightVector wrf_weights(const Forest& forest, const Dataset& train, double lambda,
                         WrfForm form = WrfForm::InversePower);

/// 1-based rank of each tree by ascending error; ties go to the lower tree index.
std::vector<std::size_t> error_ranks(const std::vector<std::optional<double>>& errors);

/// Cesaro weights: the tree ranked r gets sum_{k=r}^{M} 1/k, normalised by M.
WeightVector crf_weights_from_errors(const std::vector<std::optional<double>>& errors);
WeightVector crf_weights(const Forest& forest, const Dataset& train);

using Rational = boost::rational<std::int64_t>;
/// Exact Cesaro weights indexed by rank (rank 1 first). Supports M <= 30.
std::vector<Rational> cesaro_weights_exact(std::size_t m);

}  // namespace owrf
