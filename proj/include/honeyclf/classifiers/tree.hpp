#pragma once

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "honeyclf/core.hpp"

namespace honeyclf {

class Rng;

struct TreeParams {
  /// 0 = unlimited
  int max_depth = 0;
  int min_samples_leaf = 1;
};

struct TreeLeaf {
  int label = 0;
  /// training rows per class that reached this leaf
  std::vector<int> histogram;
};

/// x[feature] <= threshold goes left.
struct TreeSplit {
  int feature = 0;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
};

using TreeNode = std::variant<TreeLeaf, TreeSplit>;

/// Flat node array; nodes[0] is the root.
struct DecisionTree {
  std::vector<TreeNode> nodes;

  int predict(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  int depth() const;
  std::size_t leaf_count() const;
};

struct SplitChoice {
  int feature = 0;
  double threshold = 0.0;
  double impurity_decrease = 0.0;
};

double gini(std::span<const int> histogram, int total);

/// Exhaustive CART split search over the given rows and candidate features.
///
/// Candidate thresholds are midpoints between consecutive distinct sorted
/// values; the split minimizing weighted child Gini wins, ties going to the
/// lowest feature index and then the smallest threshold. Returns nothing for a
/// pure node or when no candidate leaves `min_samples_leaf` rows on each side.
/// A split whose impurity decrease is zero is still returned for an impure node
/// (otherwise XOR-like patterns can never be separated).
std::optional<SplitChoice> best_split(const Eigen::MatrixXd& x, std::span<const int> labels, int class_count,
                                      std::span<const Eigen::Index> rows, std::span<const int> features,
                                      int min_samples_leaf = 1);

/// Per-node random feature subsets for forests; `features_per_node` <= 0 uses all features.
struct FeatureSampling {
  Rng* rng = nullptr;
  int features_per_node = 0;
};

/// Grows a CART tree on `rows` (duplicates allowed, e.g. a bootstrap sample).
DecisionTree grow_tree(const Eigen::MatrixXd& x, std::span<const int> labels, int class_count,
                       std::vector<Eigen::Index> rows, const TreeParams& params, FeatureSampling sampling = {});

DecisionTree fit_tree(const TaskTable& table, const TreeParams& params = {});

/// Index of the largest count; ties go to the lowest index.
int majority(std::span<const int> histogram);

}  // namespace honeyclf
