#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "honeyclf/config.hpp"
#include "honeyclf/evaluation.hpp"
#include "honeyclf/ingest.hpp"
#include "honeyclf/model.hpp"
#include "honeyclf/report.hpp"

namespace honeyclf {

struct ExperimentConfig {
  std::filesystem::path dataset;
  /// empty = built-in default mapping
  std::filesystem::path mapping;
  SubsetFilter subset = SubsetFilter::Original;
  TaskKind task = TaskKind::Botanical;
  std::optional<std::vector<Element>> features;
  std::vector<ModelSpec> models;
  int folds = 10;
  std::uint64_t seed = 42;
  PreprocessMode mode = PreprocessMode::GlobalFit;
  Averaging averaging = Averaging::Weighted;
  std::filesystem::path out = "results";
  std::vector<TableFormat> formats = {TableFormat::Markdown, TableFormat::Delimited, TableFormat::Structured};
  bool chart = true;

  /// Keys: dataset, mapping, subset, task, features, models, folds, seed, preprocess,
  /// averaging, out, formats, chart, plus ModelSpec::override_keys().
  static ExperimentConfig from_config(const KeyValueConfig& cfg);
  static std::vector<std::string> known_keys();

  /// Throws Config for invalid settings or missing input files.
  void validate() const;
  /// Resolved settings in config-file syntax, for provenance.
  std::string describe() const;
};

/// SHA-256 of the file bytes, lowercase hex.
std::string file_digest(const std::filesystem::path& path);

struct ExperimentResult {
  std::vector<EvaluationReport> reports;
  std::vector<std::filesystem::path> files;
  /// 0 success, 2 one or more model failures
  int exit_code = 0;
};

/// ingest -> filter -> task -> cross-validate each model -> write reports, tables and chart.
/// Config and ingest problems throw; model failures are recorded in their report.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Same pipeline on an already-built task, without writing files.
std::vector<EvaluationReport> evaluate_models(const TaskTable& table, const std::vector<ModelSpec>& models, int folds,
                                              std::uint64_t seed, PreprocessMode mode,
                                              Averaging averaging = Averaging::Weighted);

}  // namespace honeyclf
