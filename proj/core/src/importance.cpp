#include "owrf/importance.hpp"

#include <algorithm>
#include <cmath>

#include "owrf/error.hpp"
#include "owrf/parallel.hpp"

namespace owrf {

std::vector<double> variable_importance(const Dataset& data, const GrowConfig& cfg,
                                        std::size_t trees, std::uint64_t seed, unsigned threads) {
  if (cfg.kind != TreeKind::Cart) throw InputError("variable importance uses CART trees");
  if (trees == 0) throw InputError("variable importance needs at least one tree");
  const std::size_t p = data.cols();
  std::vector<std::vector<double>> per_tree(trees, std::vector<double>(p, 0.0));
  parallel_for(trees, threads, [&](std::size_t m) {
    Rng rng(seed + m);
    const BootstrapSample sample = bootstrap_sample(data.rows(), rng);
    const RegressionTree tree = grow_cart(data, sample, cfg, rng);
    for (const TreeNode& node : tree.nodes()) {
      if (!node.is_leaf()) per_tree[m][static_cast<std::size_t>(node.feature)] += node.impurity_decrease;
    }
  });
  std::vector<double> total(p, 0.0);
  for (const auto& contrib : per_tree) {
    for (std::size_t j = 0; j < p; ++j) total[j] += contrib[j];
  }
  for (double& v : total) v /= double(trees);
  return total;
}

std::vector<double> prob_sequence_from_importance(const std::vector<double>& importance) {
  if (importance.empty()) throw DimensionError("empty importance vector");
  std::vector<double> out(importance.size());
  double total = 0.0;
  for (std::size_t j = 0; j < importance.size(); ++j) {
    if (!std::isfinite(importance[j])) throw InputError("importance must be finite");
    out[j] = std::max(0.0, importance[j]);
    total += out[j];
  }
  if (total == 0.0) {
    std::fill(out.begin(), out.end(), 1.0 / double(out.size()));
  } else {
    for (double& v : out) v /= total;
  }
  return out;
}

}  // namespace owrf
