#include "owrf/split.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "owrf/error.hpp"
#include "owrf/random.hpp"

namespace owrf {

std::array<std::size_t, 3> split_sizes(std::size_t n, const std::array<double, 3>& ratios) {
  double total = 0.0;
  for (double r : ratios) {
    if (!(r > 0.0) || !std::isfinite(r)) throw InputError("split ratios must be positive");
    total += r;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InputError("split ratios must sum to 1");

  std::array<std::size_t, 3> sizes{};
  std::array<double, 3> rest{};
  std::size_t assigned = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    const double quota = double(n) * ratios[k];
    // guard against 0.3 * 10 = 2.9999999999999996
    const double floor_q = std::floor(quota + 1e-9);
    sizes[k] = static_cast<std::size_t>(floor_q);
    rest[k] = std::max(0.0, quota - floor_q);
    assigned += sizes[k];
  }
  std::array<std::size_t, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rest[a] > rest[b]; });
  for (std::size_t k = 0; assigned < n; ++k, ++assigned) ++sizes[order[k % 3]];
  return sizes;
}

SplitPlan make_split(std::size_t n, const std::array<double, 3>& ratios, std::uint64_t seed) {
  const auto sizes = split_sizes(n, ratios);
  for (std::size_t s : sizes) {
    if (s == 0) throw InputError("split of " + std::to_string(n) + " rows leaves an empty part");
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);

  SplitPlan plan;
  plan.ratios = ratios;
  plan.seed = seed;
  auto take = [&](std::size_t from, std::size_t count) {
    std::vector<std::size_t> part(perm.begin() + static_cast<std::ptrdiff_t>(from),
                                  perm.begin() + static_cast<std::ptrdiff_t>(from + count));
    std::sort(part.begin(), part.end());
    return part;
  };
  plan.train = take(0, sizes[0]);
  plan.test = take(sizes[0], sizes[1]);
  plan.validation = take(sizes[0] + sizes[1], sizes[2]);
  return plan;
}

}  // namespace owrf
