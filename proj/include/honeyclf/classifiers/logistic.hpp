#pragma once

#include <vector>

#include <Eigen/Dense>

#include "honeyclf/core.hpp"

namespace honeyclf {

struct LogisticParams {
  /// L2 penalty on weights (bias excluded): loss += lambda/2 * ||W||^2
  double lambda = 1e-4;
  int max_iterations = 1000;
  double gradient_tolerance = 1e-6;
};

/// Multinomial (softmax) regression. logits = weights * x + bias.
struct SoftmaxRegression {
  Eigen::MatrixXd weights;  // K x d
  Eigen::VectorXd bias;     // K

  Eigen::VectorXd logits(const Eigen::Ref<const Eigen::VectorXd>& x) const { return weights * x + bias; }
  Eigen::VectorXd probabilities(const Eigen::Ref<const Eigen::VectorXd>& x) const;
};

struct LossAndGradient {
  double loss = 0.0;
  Eigen::MatrixXd weights;  // dL/dW
  Eigen::VectorXd bias;     // dL/db

  double max_abs() const;
};

/// Mean cross-entropy plus lambda/2 * ||W||^2, with analytic gradient.
LossAndGradient softmax_objective(const Eigen::MatrixXd& x, const std::vector<int>& labels,
                                  const SoftmaxRegression& model, double lambda);

struct LogisticTrace {
  /// Objective after each accepted step; front() is the starting objective.
  std::vector<double> losses;
  int iterations = 0;
  double final_gradient = 0.0;
  bool converged = false;
};

/// Full-batch gradient descent with Armijo backtracking, starting from W = 0, b = 0.
SoftmaxRegression fit_logreg(const TaskTable& table, const LogisticParams& params = {},
                             LogisticTrace* trace = nullptr);

}  // namespace honeyclf
