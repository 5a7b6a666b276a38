#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace owrf {

/// Mean squared / absolute forecast error of one replication.
double msfe(const Eigen::VectorXd& preds, const Eigen::VectorXd& y);
double mafe(const Eigen::VectorXd& preds, const Eigen::VectorXd& y);

struct RelativeRisk {
  std::optional<double> ratio;  // empty when the benchmark risk is zero
  bool essential = false;       // ratio outside (0.95, 1.05)
  bool undefined = false;       // zero benchmark risk
};

RelativeRisk relative_risk(double risk, double benchmark);

/// Risk of every method divided by the benchmark method's risk.
std::map<std::string, RelativeRisk> relative_risks(const std::map<std::string, double>& risks,
                                                   const std::string& benchmark);

/// 1-based ascending ranks, always a permutation of 1..k; ties go to the earlier entry.
std::vector<std::size_t> ranks(const std::vector<double>& values);

}  // namespace owrf
