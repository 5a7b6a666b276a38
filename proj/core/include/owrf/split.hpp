#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace owrf {

struct SplitPlan {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  std::vector<std::size_t> validation;
  std::array<double, 3> ratios{0.5, 0.3, 0.2};
  std::uint64_t seed = 0;
};

/// Part sizes by the largest-remainder rule; remainder ties go to the earlier part.
std::array<std::size_t, 3> split_sizes(std::size_t n, const std::array<double, 3>& ratios);

/// Uniform random train/test/validation partition of 0..n-1, deterministic in `seed`.
/// Index lists are sorted. Throws InputError when ratios are not positive or do not sum
/// to one, and when some part would be empty.
SplitPlan make_split(std::size_t n, const std::array<double, 3>& ratios = {0.5, 0.3, 0.2},
                     std::uint64_t seed = 0);

}  // namespace owrf
