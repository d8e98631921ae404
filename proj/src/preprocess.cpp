#include "honeyclf/preprocess.hpp"

#include <numeric>
#include <ostream>

#include <fmt/format.h>

#include "honeyclf/config.hpp"
#include "honeyclf/error.hpp"

namespace honeyclf {

std::string_view to_string(PreprocessMode m) {
  return m == PreprocessMode::GlobalFit ? "global" : "per-fold";
}

PreprocessMode parse_preprocess_mode(std::string_view s) {
  auto v = to_lower(s);
  if (v == "global") return PreprocessMode::GlobalFit;
  if (v == "per-fold" || v == "perfold") return PreprocessMode::PerFoldFit;
  throw Error(ErrorKind::Config, fmt::format("unknown preprocess mode '{}' (global|per-fold)", s));
}

MinMaxScaler::MinMaxScaler(Eigen::VectorXd min, Eigen::VectorXd max, std::vector<std::string> fitted_on)
    : min_(std::move(min)), max_(std::move(max)), fitted_on_(std::move(fitted_on)) {
  if (min_.size() != max_.size()) throw Error(ErrorKind::DimensionMismatch, "scaler min/max sizes differ");
  if (fitted_on_.empty()) throw Error(ErrorKind::EmptyRowSet, "scaler must be fitted on at least one row");
  if ((min_.array() > max_.array()).any()) throw Error(ErrorKind::InvalidArgument, "scaler min exceeds max");
}

void MinMaxScaler::write(std::ostream& out) const {
  out << "features = " << min_.size() << '\n';
  out << "fitted_rows = " << fitted_on_.size() << '\n';
  for (Eigen::Index j = 0; j < min_.size(); ++j) {
    out << fmt::format("min.{} = {}\nmax.{} = {}\n", j, min_(j), j, max_(j));
  }
}

TaskTable impute_missing(const TaskTable& table) {
  Eigen::MatrixXd x = table.features().unaryExpr([](double v) { return TaskTable::is_missing(v) ? 0.0 : v; });
  return table.with_features(std::move(x));
}

MinMaxScaler fit_scaler(const TaskTable& table, const std::vector<Eigen::Index>& rows) {
  if (rows.empty()) throw Error(ErrorKind::EmptyRowSet, "cannot fit a scaler on zero rows");
  const auto& x = table.features();
  Eigen::VectorXd lo = x.row(rows.front()).transpose();
  Eigen::VectorXd hi = lo;
  std::vector<std::string> ids;
  ids.reserve(rows.size());
  for (auto r : rows) {
    if (x.row(r).array().isNaN().any()) {
      throw Error(ErrorKind::InvalidArgument, "fit_scaler requires imputed data (missing cell found)");
    }
    lo = lo.cwiseMin(x.row(r).transpose());
    hi = hi.cwiseMax(x.row(r).transpose());
    ids.push_back(table.row_ids()[static_cast<std::size_t>(r)]);
  }
  return MinMaxScaler(std::move(lo), std::move(hi), std::move(ids));
}

MinMaxScaler fit_scaler(const TaskTable& table) {
  std::vector<Eigen::Index> rows(static_cast<std::size_t>(table.rows()));
  std::iota(rows.begin(), rows.end(), Eigen::Index{0});
  return fit_scaler(table, rows);
}

TaskTable apply_scaler(const MinMaxScaler& scaler, const TaskTable& table) {
  if (scaler.min().size() != table.dims()) {
    throw Error(ErrorKind::DimensionMismatch,
                fmt::format("scaler has {} features, table has {}", scaler.min().size(), table.dims()));
  }
  return table.with_features(scaler.transform(table.features()));
}

}  // namespace honeyclf
