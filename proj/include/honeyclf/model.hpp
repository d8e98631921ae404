#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "honeyclf/classifiers/discriminant.hpp"
#include "honeyclf/classifiers/forest.hpp"
#include "honeyclf/classifiers/logistic.hpp"
#include "honeyclf/classifiers/svm.hpp"
#include "honeyclf/classifiers/tree.hpp"
#include "honeyclf/config.hpp"
#include "honeyclf/core.hpp"

namespace honeyclf {

enum class Algorithm { LDA, QDA, LogisticRegression, SVM, DecisionTree, RandomForest };

inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::SVM, Algorithm::LDA,          Algorithm::QDA,
                                               Algorithm::LogisticRegression, Algorithm::DecisionTree,
                                               Algorithm::RandomForest};

/// Short report name: SVM, LDA, QDA, LR, DT, RF.
std::string_view short_name(Algorithm a);
Algorithm parse_algorithm(std::string_view s);
/// Comma list of names, or "all" for the six models in report order.
std::vector<Algorithm> parse_algorithms(std::string_view s);

struct ModelSpec {
  Algorithm algorithm = Algorithm::RandomForest;
  DiscriminantParams discriminant;
  LogisticParams logistic;
  SvmParams svm;
  TreeParams tree;
  ForestParams forest;
  std::uint64_t seed = 42;

  /// Throws InvalidArgument on out-of-range hyperparameters for this algorithm.
  void validate() const;
  /// Hyperparameters relevant to `algorithm`, as printable strings.
  std::map<std::string, std::string> hyperparameters() const;
  std::string name() const { return std::string(short_name(algorithm)); }

  /// Reads `svm.c`, `svm.kernel`, `forest.trees`, ... overrides from a flat config.
  void apply_overrides(const KeyValueConfig& cfg);
  static std::vector<std::string> override_keys();

  /// JSON object text holding every field; from_json(to_json()) is the identity.
  std::string to_json() const;
  static ModelSpec from_json(std::string_view text);
};

using ModelParameters =
    std::variant<LinearDiscriminant, QuadraticDiscriminant, SoftmaxRegression, SvmModel, DecisionTree, RandomForest>;

/// Immutable fitted predictor.
class TrainedModel {
 public:
  TrainedModel(ModelSpec spec, std::vector<std::string> classes, Eigen::Index dims, ModelParameters params);

  const ModelSpec& spec() const { return spec_; }
  const std::vector<std::string>& classes() const { return classes_; }
  Eigen::Index dims() const { return dims_; }
  const ModelParameters& parameters() const { return params_; }

  /// Class index; throws DimensionMismatch for wrong-sized input.
  int predict_index(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  std::string predict(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  std::vector<int> predict_indices(const Eigen::MatrixXd& x) const;
  std::vector<std::string> predict_batch(const Eigen::MatrixXd& x) const;

  /// Self-describing JSON text; load() reproduces predictions exactly.
  std::string serialize() const;
  static TrainedModel load(std::string_view text);

 private:
  ModelSpec spec_;
  std::vector<std::string> classes_;
  Eigen::Index dims_;
  ModelParameters params_;
};

TrainedModel fit(const TaskTable& table, const ModelSpec& spec);

}  // namespace honeyclf
