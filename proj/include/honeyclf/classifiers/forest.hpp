#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "honeyclf/classifiers/tree.hpp"
#include "honeyclf/core.hpp"

namespace honeyclf {

struct ForestParams {
  int trees = 100;
  /// Candidate features per node; 0 means floor(sqrt(d)).
  int max_features = 0;
  bool bootstrap = true;
  TreeParams tree;
  /// Worker threads for tree growth; 0 = hardware concurrency. Output does not depend on it.
  int threads = 0;
};

struct RandomForest {
  int class_count = 0;
  std::vector<DecisionTree> trees;

  Eigen::VectorXi votes(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  /// Plurality vote; ties go to the lowest class index.
  int predict(const Eigen::Ref<const Eigen::VectorXd>& x) const;
};

/// Tree t is grown from an Rng seeded with (seed XOR t): bootstrap draws first,
/// then per-node feature subsets.
RandomForest fit_forest(const TaskTable& table, const ForestParams& params, std::uint64_t seed);

}  // namespace honeyclf
