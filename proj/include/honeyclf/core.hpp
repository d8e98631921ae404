#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace honeyclf {

inline constexpr std::size_t kElementCount = 12;

/// Mineral elements in the fixed feature order used everywhere.
enum class Element { Al, B, Ba, Ca, Fe, K, Mg, Mn, Na, P, Sr, Zn };

inline constexpr std::array<Element, kElementCount> kElements = {
    Element::Al, Element::B,  Element::Ba, Element::Ca, Element::Fe, Element::K,
    Element::Mg, Element::Mn, Element::Na, Element::P,  Element::Sr, Element::Zn};

std::string_view element_symbol(Element e);
std::optional<Element> element_from_symbol(std::string_view symbol);

/// Concentrations in element order; an empty slot means "not detected".
class MineralVector {
 public:
  using Slot = std::optional<double>;

  MineralVector() = default;
  explicit MineralVector(const std::array<Slot, kElementCount>& values);

  const Slot& operator[](Element e) const { return values_[static_cast<std::size_t>(e)]; }
  const Slot& operator[](std::size_t i) const { return values_[i]; }
  const std::array<Slot, kElementCount>& values() const { return values_; }
  std::size_t missing_count() const;

  friend bool operator==(const MineralVector&, const MineralVector&) = default;

 private:
  std::array<Slot, kElementCount> values_{};
};

enum class SampleType { PureHoney, AdulteratedHoney, Syrup };

std::string_view to_string(SampleType t);

struct Sample {
  std::string id;
  SampleType sample_type = SampleType::PureHoney;
  std::optional<std::string> botanical;
  std::optional<std::string> region;
  std::optional<std::string> level;
  MineralVector minerals;

  friend bool operator==(const Sample&, const Sample&) = default;
};

struct Provenance {
  std::string source_path;
  /// logical field -> source column
  std::map<std::string, std::string> column_mapping;
  std::vector<std::string> filters;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

/// Ordered, immutable collection of samples with unique ids.
class Dataset {
 public:
  Dataset(std::vector<Sample> samples, Provenance provenance);

  const std::vector<Sample>& samples() const { return samples_; }
  const Provenance& provenance() const { return provenance_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<Sample> samples_;
  Provenance provenance_;
};

enum class TaskKind { Botanical, Geographical };

std::string_view to_string(TaskKind k);

/// Sorted, de-duplicated class names. Index in the result is the class index.
std::vector<std::string> canonical_classes(const std::vector<std::string>& labels);

/// Feature matrix plus integer labels for one classification task.
///
/// Missing (not detected) cells are stored as quiet NaN until imputation.
/// Classes are kept in lexicographic order; ties anywhere downstream go to
/// the lowest class index.
class TaskTable {
 public:
  TaskTable(Eigen::MatrixXd features, std::vector<int> labels, std::vector<std::string> classes,
            TaskKind kind = TaskKind::Botanical, std::vector<std::string> feature_names = {},
            std::vector<std::string> row_ids = {});

  /// Builds a table from string labels, canonicalizing the class list.
  static TaskTable from_names(Eigen::MatrixXd features, const std::vector<std::string>& names,
                              TaskKind kind = TaskKind::Botanical);

  const Eigen::MatrixXd& features() const { return features_; }
  const std::vector<int>& labels() const { return labels_; }
  const std::vector<std::string>& classes() const { return classes_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }
  const std::vector<std::string>& row_ids() const { return row_ids_; }
  TaskKind kind() const { return kind_; }

  Eigen::Index rows() const { return features_.rows(); }
  Eigen::Index dims() const { return features_.cols(); }
  std::size_t class_count() const { return classes_.size(); }
  std::size_t missing_count() const;
  std::vector<std::size_t> class_support() const;

  /// Rows in the given order; class list is kept even if some classes vanish.
  TaskTable subset(const std::vector<Eigen::Index>& rows) const;
  TaskTable with_features(Eigen::MatrixXd features) const;

  static bool is_missing(double v);
  static double missing();

 private:
  Eigen::MatrixXd features_;
  std::vector<int> labels_;
  std::vector<std::string> classes_;
  TaskKind kind_;
  std::vector<std::string> feature_names_;
  std::vector<std::string> row_ids_;
};

}  // namespace honeyclf
