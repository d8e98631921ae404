#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "honeyclf/config.hpp"
#include "honeyclf/core.hpp"

namespace honeyclf {

/// Which source column feeds each logical field, and how cells are encoded.
struct ColumnMapping {
  /// No id column means ids are 1-based data-row numbers.
  std::optional<std::string> id;
  std::string sample_type = "Sample type";
  std::string botanical = "Botanical origin";
  std::string region = "Region";
  std::string level = "Level";
  std::array<std::string, kElementCount> elements = {"Al", "B",  "Ba", "Ca", "Fe", "K",
                                                     "Mg", "Mn", "Na", "P",  "Sr", "Zn"};
  std::string missing_token = "ND";
  char delimiter = ',';

  // Cell values that identify each sample type (case-insensitive).
  std::string pure_value = "Pure honey";
  std::string adulterated_value = "Adulterated honey";
  std::string syrup_value = "Syrup";

  /// Throws Config when element columns collide or the missing token is empty.
  void validate() const;

  /// Overrides defaults with keys from a flat config (see config/default_mapping.conf).
  static ColumnMapping from_config(const KeyValueConfig& cfg);
  static ColumnMapping load(const std::filesystem::path& path);

  std::map<std::string, std::string> as_map() const;
};

enum class SubsetFilter { Original, PureHoney, AdulteratedHoney };

std::string_view to_string(SubsetFilter f);
SubsetFilter parse_subset(std::string_view s);
TaskKind parse_task_kind(std::string_view s);

Dataset parse_dataset(const std::filesystem::path& path, const ColumnMapping& mapping);
Dataset parse_dataset(std::istream& in, const ColumnMapping& mapping, const std::string& source);

Dataset filter_subset(const Dataset& ds, SubsetFilter filter);

/// Label rules: botanical tasks label syrup rows with the literal class "Syrup".
TaskTable build_task(const Dataset& ds, TaskKind kind,
                     const std::optional<std::vector<Element>>& feature_filter = std::nullopt);

/// Writes `ds` in the delimited format understood by parse_dataset with `mapping`.
/// When the mapping has no id column, ids are written under the column "id".
void write_dataset(const Dataset& ds, const ColumnMapping& mapping, std::ostream& out);

struct DatasetSummary {
  std::map<SampleType, std::size_t> type_counts;
  /// honey rows only
  std::map<std::string, std::size_t> botanical_counts;
  /// rows with a region
  std::map<std::string, std::size_t> region_counts;
  std::size_t missing_cells = 0;
};

DatasetSummary summarize(const Dataset& ds);

}  // namespace honeyclf
