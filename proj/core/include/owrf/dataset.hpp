#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace owrf {

/// Learning sample: an n x p predictor matrix with its response vector.
///
/// Construction validates shape (n >= 1, p >= 1, matching row counts) and
/// rejects non-finite values, so every Dataset in circulation is complete.
class Dataset {
 public:
  Dataset(Eigen::MatrixXd x, Eigen::VectorXd y, std::vector<std::string> names = {});

  [[nodiscard]] std::size_t rows() const { return static_cast<std::size_t>(x_.rows()); }
  [[nodiscard]] std::size_t cols() const { return static_cast<std::size_t>(x_.cols()); }

  [[nodiscard]] const Eigen::MatrixXd& x() const { return x_; }
  [[nodiscard]] const Eigen::VectorXd& y() const { return y_; }
  [[nodiscard]] const std::vector<std::string>& names() const { return names_; }

  [[nodiscard]] double x(std::size_t row, std::size_t col) const {
    return x_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
  }
  [[nodiscard]] double y(std::size_t row) const { return y_(static_cast<Eigen::Index>(row)); }

  /// Rows in the given order, as a new Dataset.
  [[nodiscard]] Dataset subset(const std::vector<std::size_t>& rows) const;

 private:
  Eigen::MatrixXd x_;
  Eigen::VectorXd y_;
  std::vector<std::string> names_;
};

}  // namespace owrf
