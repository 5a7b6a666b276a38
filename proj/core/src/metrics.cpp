#include "owrf/metrics.hpp"

#include <cmath>

#include "owrf/error.hpp"

namespace owrf {

namespace {

void check_pair(const Eigen::VectorXd& preds, const Eigen::VectorXd& y) {
  if (preds.size() == 0) throw InputError("forecast error of an empty sample");
  if (preds.size() != y.size()) throw DimensionError("predictions and responses differ in length");
}

}  // namespace

double msfe(const Eigen::VectorXd& preds, const Eigen::VectorXd& y) {
  check_pair(preds, y);
  return (preds - y).squaredNorm() / double(y.size());
}

double mafe(const Eigen::VectorXd& preds, const Eigen::VectorXd& y) {
  check_pair(preds, y);
  return (preds - y).cwiseAbs().sum() / double(y.size());
}

RelativeRisk relative_risk(double risk, double benchmark) {
  RelativeRisk out;
  if (benchmark == 0.0 || !std::isfinite(benchmark)) {
    out.undefined = true;
    return out;
  }
  out.ratio = risk / benchmark;
  out.essential = !(*out.ratio > 0.95 && *out.ratio < 1.05);
  return out;
}

std::map<std::string, RelativeRisk> relative_risks(const std::map<std::string, double>& risks,
                                                   const std::string& benchmark) {
  const auto it = risks.find(benchmark);
  if (it == risks.end()) throw InputError("benchmark method '" + benchmark + "' missing from report");
  std::map<std::string, RelativeRisk> out;
  for (const auto& [name, risk] : risks) {
    out[name] = name == benchmark && it->second != 0.0 ? RelativeRisk{1.0, false, false}
                                                       : relative_risk(risk, it->second);
  }
  return out;
}

std::vector<std::size_t> ranks(const std::vector<double>& values) {
  std::vector<std::size_t> out(values.size(), 1);
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = 0; j < values.size(); ++j) {
      if (values[j] < values[i] || (values[j] == values[i] && j < i)) ++out[i];
    }
  }
  return out;
}

}  // namespace owrf
