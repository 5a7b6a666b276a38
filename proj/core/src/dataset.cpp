#include "owrf/dataset.hpp"

#include <string>

#include "owrf/error.hpp"

namespace owrf {

Dataset::Dataset(Eigen::MatrixXd x, Eigen::VectorXd y, std::vector<std::string> names)
    : x_(std::move(x)), y_(std::move(y)), names_(std::move(names)) {
  if (x_.rows() < 1 || x_.cols() < 1) {
    throw DimensionError("dataset needs at least one row and one column");
  }
  if (x_.rows() != y_.size()) {
    throw DimensionError("predictor rows (" + std::to_string(x_.rows()) +
                         ") and response length (" + std::to_string(y_.size()) + ") differ");
  }
  if (!x_.allFinite() || !y_.allFinite()) {
    throw InputError("dataset contains missing or non-finite values");
  }
  if (names_.empty()) {
    names_.reserve(cols());
    for (std::size_t j = 0; j < cols(); ++j) names_.push_back("x" + std::to_string(j + 1));
  } else if (names_.size() != cols()) {
    throw DimensionError("column name count does not match predictor columns");
  }
}

Dataset Dataset::subset(const std::vector<std::size_t>& rows) const {
  Eigen::MatrixXd xs(static_cast<Eigen::Index>(rows.size()), x_.cols());
  Eigen::VectorXd ys(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] >= this->rows()) throw DimensionError("subset row index out of range");
    xs.row(static_cast<Eigen::Index>(k)) = x_.row(static_cast<Eigen::Index>(rows[k]));
    ys(static_cast<Eigen::Index>(k)) = y_(static_cast<Eigen::Index>(rows[k]));
  }
  return Dataset(std::move(xs), std::move(ys), names_);
}

}  // namespace owrf
