#include "honeyclf/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <unordered_set>

#include <fmt/format.h>

#include "honeyclf/error.hpp"

namespace honeyclf {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnmappedColumn: return "UnmappedColumn";
    case ErrorKind::MalformedCell: return "MalformedCell";
    case ErrorKind::EmptyDataset: return "EmptyDataset";
    case ErrorKind::MissingLabel: return "MissingLabel";
    case ErrorKind::SingleClass: return "SingleClass";
    case ErrorKind::EmptyRowSet: return "EmptyRowSet";
    case ErrorKind::InsufficientRows: return "InsufficientRows";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::InsufficientClassSamples: return "InsufficientClassSamples";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::TooFewSamples: return "TooFewSamples";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::UnknownLabel: return "UnknownLabel";
    case ErrorKind::EmptyMatrix: return "EmptyMatrix";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Config: return "Config";
    case ErrorKind::UnwritablePath: return "UnwritablePath";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

std::string_view element_symbol(Element e) {
  static constexpr std::array<std::string_view, kElementCount> symbols = {
      "Al", "B", "Ba", "Ca", "Fe", "K", "Mg", "Mn", "Na", "P", "Sr", "Zn"};
  return symbols[static_cast<std::size_t>(e)];
}

std::optional<Element> element_from_symbol(std::string_view symbol) {
  for (Element e : kElements) {
    if (element_symbol(e) == symbol) return e;
  }
  return std::nullopt;
}

MineralVector::MineralVector(const std::array<Slot, kElementCount>& values) : values_(values) {
  for (std::size_t i = 0; i < kElementCount; ++i) {
    if (values_[i] && (!std::isfinite(*values_[i]) || *values_[i] < 0.0)) {
      throw Error(ErrorKind::InvalidArgument,
                  fmt::format("concentration for {} must be finite and >= 0, got {}",
                              element_symbol(kElements[i]), *values_[i]));
    }
  }
}

std::size_t MineralVector::missing_count() const {
  return static_cast<std::size_t>(
      std::count_if(values_.begin(), values_.end(), [](const Slot& s) { return !s.has_value(); }));
}

std::string_view to_string(SampleType t) {
  switch (t) {
    case SampleType::PureHoney: return "PureHoney";
    case SampleType::AdulteratedHoney: return "AdulteratedHoney";
    case SampleType::Syrup: return "Syrup";
  }
  return "?";
}

std::string_view to_string(TaskKind k) {
  return k == TaskKind::Botanical ? "botanical" : "geographical";
}

Dataset::Dataset(std::vector<Sample> samples, Provenance provenance)
    : samples_(std::move(samples)), provenance_(std::move(provenance)) {
  std::unordered_set<std::string> seen;
  for (const auto& s : samples_) {
    if (!seen.insert(s.id).second) {
      throw Error(ErrorKind::InvalidArgument, fmt::format("duplicate sample id '{}'", s.id));
    }
  }
}

std::vector<std::string> canonical_classes(const std::vector<std::string>& labels) {
  std::set<std::string> unique(labels.begin(), labels.end());
  return {unique.begin(), unique.end()};
}

TaskTable::TaskTable(Eigen::MatrixXd features, std::vector<int> labels,
                     std::vector<std::string> classes, TaskKind kind,
                     std::vector<std::string> feature_names, std::vector<std::string> row_ids)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      classes_(std::move(classes)),
      kind_(kind),
      feature_names_(std::move(feature_names)),
      row_ids_(std::move(row_ids)) {
  if (static_cast<std::size_t>(features_.rows()) != labels_.size()) {
    throw Error(ErrorKind::LengthMismatch,
                fmt::format("{} feature rows but {} labels", features_.rows(), labels_.size()));
  }
  if (!std::is_sorted(classes_.begin(), classes_.end()) ||
      std::adjacent_find(classes_.begin(), classes_.end()) != classes_.end()) {
    throw Error(ErrorKind::InvalidArgument, "class list must be sorted and unique");
  }
  std::set<int> distinct;
  for (int y : labels_) {
    if (y < 0 || static_cast<std::size_t>(y) >= classes_.size()) {
      throw Error(ErrorKind::UnknownLabel, fmt::format("label index {} out of range", y));
    }
    distinct.insert(y);
  }
  if (labels_.size() < 2 || distinct.size() < 2) {
    throw Error(ErrorKind::SingleClass,
                fmt::format("task needs >= 2 rows and >= 2 distinct labels (rows={}, labels={})",
                            labels_.size(), distinct.size()));
  }
  if (feature_names_.empty()) {
    for (Eigen::Index j = 0; j < features_.cols(); ++j) feature_names_.push_back(fmt::format("x{}", j));
  }
  if (feature_names_.size() != static_cast<std::size_t>(features_.cols())) {
    throw Error(ErrorKind::LengthMismatch, "feature name count differs from column count");
  }
  if (row_ids_.empty()) {
    for (std::size_t i = 0; i < labels_.size(); ++i) row_ids_.push_back(std::to_string(i + 1));
  }
  if (row_ids_.size() != labels_.size()) {
    throw Error(ErrorKind::LengthMismatch, "row id count differs from row count");
  }
}

TaskTable TaskTable::from_names(Eigen::MatrixXd features, const std::vector<std::string>& names,
                                TaskKind kind) {
  auto classes = canonical_classes(names);
  std::vector<int> labels;
  labels.reserve(names.size());
  for (const auto& n : names) {
    labels.push_back(static_cast<int>(std::lower_bound(classes.begin(), classes.end(), n) - classes.begin()));
  }
  return TaskTable(std::move(features), std::move(labels), std::move(classes), kind);
}

std::size_t TaskTable::missing_count() const {
  return static_cast<std::size_t>(features_.unaryExpr([](double v) { return is_missing(v) ? 1 : 0; }).sum());
}

std::vector<std::size_t> TaskTable::class_support() const {
  std::vector<std::size_t> support(classes_.size(), 0);
  for (int y : labels_) ++support[static_cast<std::size_t>(y)];
  return support;
}

TaskTable TaskTable::subset(const std::vector<Eigen::Index>& rows) const {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), features_.cols());
  std::vector<int> y;
  std::vector<std::string> ids;
  y.reserve(rows.size());
  ids.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    x.row(static_cast<Eigen::Index>(i)) = features_.row(rows[i]);
    y.push_back(labels_[static_cast<std::size_t>(rows[i])]);
    ids.push_back(row_ids_[static_cast<std::size_t>(rows[i])]);
  }
  return TaskTable(std::move(x), std::move(y), classes_, kind_, feature_names_, std::move(ids));
}

TaskTable TaskTable::with_features(Eigen::MatrixXd features) const {
  if (features.rows() != features_.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "replacement features must keep the row count");
  }
  auto names = features.cols() == features_.cols() ? feature_names_ : std::vector<std::string>{};
  return TaskTable(std::move(features), labels_, classes_, kind_, std::move(names), row_ids_);
}

bool TaskTable::is_missing(double v) { return std::isnan(v); }

double TaskTable::missing() { return std::numeric_limits<double>::quiet_NaN(); }

}  // namespace honeyclf
