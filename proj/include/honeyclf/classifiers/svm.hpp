#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "honeyclf/core.hpp"

namespace honeyclf {

enum class KernelType { Linear, Polynomial, Rbf };

std::string_view to_string(KernelType k);
KernelType parse_kernel(std::string_view s);

struct Kernel {
  KernelType type = KernelType::Linear;
  int degree = 3;
  /// Polynomial/RBF scale; 0 means 1/d at fit time.
  double gamma = 0.0;
  double coef0 = 0.0;

  double operator()(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b) const;
};

struct SvmParams {
  double c = 1.0;
  Kernel kernel;
  /// Stop when the maximal KKT violation (m - M gap) is at most this.
  double tolerance = 1e-3;
};

/// Solution of one soft-margin dual problem. Decision f(x) = sum_i alpha_i y_i K(x_i, x) + bias.
struct SmoSolution {
  Eigen::VectorXd alpha;
  double bias = 0.0;
  long iterations = 0;
  bool converged = false;
};

/// SMO with second-order working-set selection. `labels` holds +1/-1.
/// `gram` is the full kernel matrix of the training points.
SmoSolution solve_smo(const Eigen::MatrixXd& gram, const Eigen::VectorXd& labels, double c, double tolerance);

/// Largest KKT violation of a solution, measured on y_i f(x_i) against the margin 1.
double kkt_violation(const Eigen::MatrixXd& gram, const Eigen::VectorXd& labels, const SmoSolution& sol, double c);

/// One-vs-one machine: decision > 0 votes for `positive`, otherwise for `negative`.
struct BinaryMachine {
  int positive = 0;
  int negative = 1;
  Eigen::MatrixXd support_vectors;  // rows
  Eigen::VectorXd coefficients;     // alpha_i * y_i
  double bias = 0.0;

  double decision(const Kernel& kernel, const Eigen::Ref<const Eigen::VectorXd>& x) const;
};

struct SvmModel {
  Kernel kernel;  // gamma resolved
  int class_count = 0;
  std::vector<BinaryMachine> machines;

  Eigen::VectorXi votes(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  int predict(const Eigen::Ref<const Eigen::VectorXd>& x) const;
};

/// One machine per unordered pair of classes present in training (lower index is positive).
SvmModel fit_svm(const TaskTable& table, const SvmParams& params = {});

}  // namespace honeyclf
