#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "owrf/random.hpp"

namespace owrf {

/// Multiplicity histogram of one bootstrap draw: counts[i] = how often row i was drawn.
/// Row i is out-of-bag iff counts[i] == 0; the counts always sum to n.
class BootstrapSample {
 public:
  explicit BootstrapSample(std::vector<std::uint32_t> counts);

  [[nodiscard]] std::size_t size() const { return counts_.size(); }
  [[nodiscard]] std::uint32_t count(std::size_t i) const { return counts_[i]; }
  [[nodiscard]] const std::vector<std::uint32_t>& counts() const { return counts_; }
  [[nodiscard]] bool out_of_bag(std::size_t i) const { return counts_[i] == 0; }
  [[nodiscard]] std::size_t oob_count() const;

  /// Sample with every row drawn exactly once (no bootstrap).
  static BootstrapSample identity(std::size_t n);

 private:
  std::vector<std::uint32_t> counts_;
};

/// n i.i.d. uniform draws from {0..n-1}, tallied. Throws DomainError for n = 0.
BootstrapSample bootstrap_sample(std::size_t n, Rng& rng);

}  // namespace owrf
