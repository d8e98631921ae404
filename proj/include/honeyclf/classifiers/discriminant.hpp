#pragma once

#include <vector>

#include <Eigen/Dense>

#include "honeyclf/core.hpp"

namespace honeyclf {

struct DiscriminantParams {
  /// Ridge = factor * trace(cov)/d, starting at ridge_start and escalated x10 up to ridge_limit.
  double ridge_start = 1e-6;
  double ridge_limit = 1e-2;
};

/// Gaussian classifier with a pooled within-class covariance.
/// score_k(x) = x' * weights_k + offsets_k
struct LinearDiscriminant {
  Eigen::MatrixXd means;    // K x d
  Eigen::VectorXd priors;   // K, zero for classes absent from training
  Eigen::MatrixXd pooled;   // d x d, before ridge
  double ridge = 0.0;
  Eigen::MatrixXd weights;  // K x d, Sigma^-1 mu_k
  Eigen::VectorXd offsets;  // K, -1/2 mu_k' Sigma^-1 mu_k + ln pi_k (-inf if absent)

  Eigen::VectorXd scores(const Eigen::Ref<const Eigen::VectorXd>& x) const;
};

/// Gaussian classifier with one covariance per class.
struct QuadraticDiscriminant {
  Eigen::MatrixXd means;                 // K x d
  Eigen::VectorXd priors;                // K
  std::vector<Eigen::MatrixXd> factors;  // lower Cholesky factor of Sigma_k + ridge_k I (empty if absent)
  Eigen::VectorXd ridges;                // K
  Eigen::VectorXd log_dets;              // K

  Eigen::VectorXd scores(const Eigen::Ref<const Eigen::VectorXd>& x) const;
};

/// Classes with no training rows are never predicted. Throws InsufficientClassSamples
/// when a present class has a single row or n <= number of present classes.
LinearDiscriminant fit_lda(const TaskTable& table, const DiscriminantParams& params = {});

/// Throws InsufficientClassSamples when any present class has fewer than 2 rows.
QuadraticDiscriminant fit_qda(const TaskTable& table, const DiscriminantParams& params = {});

/// Index of the largest score; ties go to the lowest index.
int argmax_lowest(const Eigen::Ref<const Eigen::VectorXd>& scores);

}  // namespace honeyclf
