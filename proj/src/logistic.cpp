#include "honeyclf/classifiers/logistic.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "honeyclf/error.hpp"
#include "honeyclf/numerics.hpp"

namespace honeyclf {

Eigen::VectorXd SoftmaxRegression::probabilities(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return numerics::softmax(logits(x));
}

double LossAndGradient::max_abs() const {
  return std::max(weights.cwiseAbs().maxCoeff(), bias.size() ? bias.cwiseAbs().maxCoeff() : 0.0);
}

LossAndGradient softmax_objective(const Eigen::MatrixXd& x, const std::vector<int>& labels,
                                  const SoftmaxRegression& model, double lambda) {
  const auto n = x.rows();
  // n x K logits, then row-wise log-softmax
  Eigen::MatrixXd z = x * model.weights.transpose();
  z.rowwise() += model.bias.transpose();
  const Eigen::VectorXd top = z.rowwise().maxCoeff();
  Eigen::MatrixXd p = (z.colwise() - top).array().exp().matrix();
  const Eigen::VectorXd norm = p.rowwise().sum();
  double loss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int y = labels[static_cast<std::size_t>(i)];
    loss -= z(i, y) - top(i) - std::log(norm(i));
    p.row(i) /= norm(i);
    p(i, y) -= 1.0;
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  LossAndGradient out;
  out.loss = loss * inv_n + 0.5 * lambda * model.weights.squaredNorm();
  out.weights = (p.transpose() * x) * inv_n + lambda * model.weights;
  out.bias = p.colwise().sum().transpose() * inv_n;
  return out;
}

SoftmaxRegression fit_logreg(const TaskTable& table, const LogisticParams& params, LogisticTrace* trace) {
  if (!(params.lambda >= 0.0)) throw Error(ErrorKind::InvalidArgument, "lambda must be >= 0");
  if (!table.features().allFinite()) {
    throw Error(ErrorKind::InvalidArgument, "logistic regression requires finite (imputed) features");
  }
  std::set<int> distinct(table.labels().begin(), table.labels().end());
  if (distinct.size() < 2) throw Error(ErrorKind::SingleClass, "logistic regression needs at least two classes");

  const auto& x = table.features();
  const auto& y = table.labels();
  const auto k = static_cast<Eigen::Index>(table.class_count());
  SoftmaxRegression model{Eigen::MatrixXd::Zero(k, x.cols()), Eigen::VectorXd::Zero(k)};

  LogisticTrace local;
  LogisticTrace& t = trace ? *trace : local;
  t = LogisticTrace{};

  constexpr double kArmijo = 1e-4;
  double step = 1.0;
  auto current = softmax_objective(x, y, model, params.lambda);
  t.losses.push_back(current.loss);
  for (int it = 0; it < params.max_iterations; ++it) {
    if (current.max_abs() < params.gradient_tolerance) {
      t.converged = true;
      break;
    }
    const double gnorm2 = current.weights.squaredNorm() + current.bias.squaredNorm();
    step = std::min(step * 2.0, 1e6);
    bool accepted = false;
    while (step > 1e-20) {
      SoftmaxRegression trial{model.weights - step * current.weights, model.bias - step * current.bias};
      auto next = softmax_objective(x, y, trial, params.lambda);
      if (std::isfinite(next.loss) && next.loss <= current.loss - kArmijo * step * gnorm2) {
        model = std::move(trial);
        current = std::move(next);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    t.losses.push_back(current.loss);
    t.iterations = it + 1;
  }
  if (!t.converged && current.max_abs() < params.gradient_tolerance) t.converged = true;
  t.final_gradient = current.max_abs();
  return model;
}

}  // namespace honeyclf
