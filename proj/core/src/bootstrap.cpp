#include "owrf/bootstrap.hpp"

#include <algorithm>
#include <numeric>

#include "owrf/error.hpp"

namespace owrf {

BootstrapSample::BootstrapSample(std::vector<std::uint32_t> counts) : counts_(std::move(counts)) {
  if (counts_.empty()) throw DomainError("bootstrap sample over zero rows");
  const std::uint64_t total = std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
  if (total != counts_.size()) throw InputError("bootstrap counts must sum to n");
}

std::size_t BootstrapSample::oob_count() const {
  return static_cast<std::size_t>(std::count(counts_.begin(), counts_.end(), 0U));
}

BootstrapSample BootstrapSample::identity(std::size_t n) {
  return BootstrapSample(std::vector<std::uint32_t>(n, 1U));
}

BootstrapSample bootstrap_sample(std::size_t n, Rng& rng) {
  if (n == 0) throw DomainError("bootstrap_sample: n must be >= 1");
  std::vector<std::uint32_t> counts(n, 0U);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t k = 0; k < n; ++k) ++counts[pick(rng)];
  return BootstrapSample(std::move(counts));
}

}  // namespace owrf
