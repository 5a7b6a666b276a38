#pragma once

#include <cstdint>
#include <vector>

#include "owrf/dataset.hpp"
#include "owrf/grow.hpp"

namespace owrf {

/// Impurity-decrease importance: grows `trees` CART trees on bootstraps of `data`,
/// sums (parent SSE - children SSE) per split feature and averages over trees.
std::vector<double> variable_importance(const Dataset& data, const GrowConfig& cfg,
                                        std::size_t trees, std::uint64_t seed,
                                        unsigned threads = 1);

/// Importance -> SUT probability sequence. Negatives are clamped to 0; an all-zero
/// vector maps to the uniform distribution.
std::vector<double> prob_sequence_from_importance(const std::vector<double>& importance);

}  // namespace owrf
