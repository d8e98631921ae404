#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "honeyclf/core.hpp"
#include "honeyclf/model.hpp"
#include "honeyclf/preprocess.hpp"

namespace honeyclf {

struct FoldAssignment {
  int k = 0;
  std::uint64_t seed = 0;
  /// fold index per row, in [0, k)
  std::vector<int> fold;
  std::vector<std::string> warnings;

  std::vector<std::size_t> fold_sizes() const;
  std::vector<Eigen::Index> test_rows(int f) const;
  std::vector<Eigen::Index> train_rows(int f) const;
};

/// Per class (canonical order): shuffle that class's rows with the seeded Rng,
/// then deal them round-robin. The dealing position carries over from one
/// class to the next, so total fold sizes also differ by at most one.
FoldAssignment stratified_folds(const TaskTable& table, int k, std::uint64_t seed);

/// counts(true, predicted)
class ConfusionMatrix {
 public:
  using Counts = Eigen::Matrix<long, Eigen::Dynamic, Eigen::Dynamic>;

  explicit ConfusionMatrix(std::vector<std::string> classes);
  ConfusionMatrix(std::vector<std::string> classes, Counts counts);

  const std::vector<std::string>& classes() const { return classes_; }
  const Counts& counts() const { return counts_; }
  long total() const { return counts_.sum(); }
  long trace() const { return counts_.trace(); }

  void add(int truth, int predicted);
  ConfusionMatrix& operator+=(const ConfusionMatrix& other);
  friend bool operator==(const ConfusionMatrix& a, const ConfusionMatrix& b) {
    return a.classes_ == b.classes_ && a.counts_ == b.counts_;
  }

 private:
  std::vector<std::string> classes_;
  Counts counts_;
};

ConfusionMatrix compute_confusion(const std::vector<std::string>& truth, const std::vector<std::string>& predicted,
                                  const std::vector<std::string>& classes);
ConfusionMatrix compute_confusion(const std::vector<int>& truth, const std::vector<int>& predicted,
                                  const std::vector<std::string>& classes);

struct ClassMetric {
  std::string name;
  double tp_rate = 0.0;
  double fp_rate = 0.0;
  /// empty when the class was never predicted
  std::optional<double> precision;
  double recall = 0.0;
  std::optional<double> f_measure;
  long support = 0;
};

using ClassMetrics = std::vector<ClassMetric>;

ClassMetrics per_class_metrics(const ConfusionMatrix& cm);

enum class Averaging { Weighted, Macro };

std::string_view to_string(Averaging a);

struct AggregateMetrics {
  double accuracy = 0.0;  // percent
  std::optional<double> precision;
  double recall = 0.0;
  std::optional<double> f_measure;
};

/// Support-weighted (or macro) means over classes with support > 0. An undefined
/// precision in any such class makes the aggregate precision and F undefined.
AggregateMetrics aggregate_metrics(const ClassMetrics& metrics, const ConfusionMatrix& cm,
                                   Averaging averaging = Averaging::Weighted);

struct EvaluationReport {
  ModelSpec spec;
  PreprocessMode mode = PreprocessMode::GlobalFit;
  Averaging averaging = Averaging::Weighted;
  FoldAssignment folds;
  ConfusionMatrix confusion{{}};
  ClassMetrics per_class;
  AggregateMetrics aggregate;
  /// pooled held-out prediction per row
  std::vector<int> predictions;
  std::vector<std::string> row_ids;
  /// Excluded from serialized reports so they stay byte-reproducible.
  double wall_seconds = 0.0;
  /// dataset digest, subset, task, ... filled in by the experiment runner
  std::map<std::string, std::string> provenance;
  std::optional<std::string> error;
};

using Predictor = std::function<std::vector<int>(const Eigen::MatrixXd&)>;
using Learner = std::function<Predictor(const TaskTable&)>;

/// Imputes, normalizes per `mode`, then trains on k-1 folds and predicts the
/// held-out fold. Fit errors are rethrown with the fold index attached.
EvaluationReport cross_validate(const TaskTable& table, const Learner& learner, int k, std::uint64_t seed,
                                PreprocessMode mode, Averaging averaging = Averaging::Weighted);

EvaluationReport cross_validate(const TaskTable& table, const ModelSpec& spec, int k, std::uint64_t seed,
                                PreprocessMode mode, Averaging averaging = Averaging::Weighted);

}  // namespace honeyclf
