#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "honeyclf/core.hpp"

namespace honeyclf {

enum class PreprocessMode {
  /// Scaler fitted on the whole task table before cross-validation.
  GlobalFit,
  /// Scaler fitted on each training fold only.
  PerFoldFit,
};

std::string_view to_string(PreprocessMode m);
PreprocessMode parse_preprocess_mode(std::string_view s);

/// Per-feature min/max for (x - min) / (max - min).
class MinMaxScaler {
 public:
  MinMaxScaler(Eigen::VectorXd min, Eigen::VectorXd max, std::vector<std::string> fitted_on);

  const Eigen::VectorXd& min() const { return min_; }
  const Eigen::VectorXd& max() const { return max_; }
  const std::vector<std::string>& fitted_on() const { return fitted_on_; }

  /// Constant features map to 0. Out-of-range values are not clamped.
  template <typename Derived>
  Eigen::MatrixXd transform(const Eigen::MatrixBase<Derived>& x) const {
    Eigen::MatrixXd out(x.rows(), x.cols());
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      const double range = max_(j) - min_(j);
      if (range > 0.0) {
        out.col(j) = (x.col(j).array() - min_(j)) / range;
      } else {
        out.col(j).setZero();
      }
    }
    return out;
  }

  /// Small `key = value` artifact recorded in report provenance.
  void write(std::ostream& out) const;

 private:
  Eigen::VectorXd min_;
  Eigen::VectorXd max_;
  std::vector<std::string> fitted_on_;
};

/// Replaces every not-detected cell with 0.
TaskTable impute_missing(const TaskTable& table);

/// Throws EmptyRowSet for an empty row list and InvalidArgument if a selected row is still missing values.
MinMaxScaler fit_scaler(const TaskTable& table, const std::vector<Eigen::Index>& rows);
MinMaxScaler fit_scaler(const TaskTable& table);

TaskTable apply_scaler(const MinMaxScaler& scaler, const TaskTable& table);

}  // namespace honeyclf
