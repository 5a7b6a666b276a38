#include "owrf/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "owrf/error.hpp"

namespace owrf {

Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v) {
  const Eigen::Index m = v.size();
  if (m == 0) throw DimensionError("projection of an empty vector");
  std::vector<double> sorted(v.data(), v.data() + m);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (Eigen::Index k = 0; k < m; ++k) {
    cumulative += sorted[static_cast<std::size_t>(k)];
    const double candidate = (cumulative - 1.0) / double(k + 1);
    if (sorted[static_cast<std::size_t>(k)] - candidate > 0.0) theta = candidate;
  }
  return (v.array() - theta).max(0.0).matrix();
}

Eigen::VectorXd snap_to_simplex(const Eigen::VectorXd& w, double floor) {
  Eigen::VectorXd out = w;
  for (Eigen::Index m = 0; m < out.size(); ++m) {
    if (out(m) < floor) out(m) = 0.0;
  }
  const double total = out.sum();
  if (!(total > 0.0)) return project_to_simplex(w);
  return out / total;
}

double frank_wolfe_gap(const Eigen::VectorXd& w, const Eigen::VectorXd& gradient) {
  return std::max(0.0, gradient.dot(w) - gradient.minCoeff());
}

bool in_simplex(const Eigen::VectorXd& w, double tol) {
  return w.size() > 0 && w.allFinite() && w.minCoeff() >= -tol && std::abs(w.sum() - 1.0) <= tol;
}

}  // namespace owrf
