#include "honeyclf/classifiers/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "honeyclf/config.hpp"
#include "honeyclf/error.hpp"

namespace honeyclf {
namespace {

constexpr double kTau = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

bool in_up(double y, double a, double c) { return (y > 0 && a < c) || (y < 0 && a > 0); }
bool in_low(double y, double a, double c) { return (y > 0 && a > 0) || (y < 0 && a < c); }

}  // namespace

std::string_view to_string(KernelType k) {
  switch (k) {
    case KernelType::Linear: return "linear";
    case KernelType::Polynomial: return "polynomial";
    case KernelType::Rbf: return "rbf";
  }
  return "?";
}

KernelType parse_kernel(std::string_view s) {
  auto v = to_lower(s);
  if (v == "linear") return KernelType::Linear;
  if (v == "polynomial" || v == "poly") return KernelType::Polynomial;
  if (v == "rbf" || v == "radial") return KernelType::Rbf;
  throw Error(ErrorKind::Config, fmt::format("unknown kernel '{}' (linear|polynomial|rbf)", s));
}

double Kernel::operator()(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b) const {
  switch (type) {
    case KernelType::Linear: return a.dot(b);
    case KernelType::Polynomial: return std::pow(gamma * a.dot(b) + coef0, degree);
    case KernelType::Rbf: return std::exp(-gamma * (a - b).squaredNorm());
  }
  return 0.0;
}

SmoSolution solve_smo(const Eigen::MatrixXd& gram, const Eigen::VectorXd& y, double c, double tolerance) {
  const auto n = y.size();
  if (gram.rows() != n || gram.cols() != n) throw Error(ErrorKind::DimensionMismatch, "gram matrix size differs from label count");
  if (!(c > 0.0)) throw Error(ErrorKind::InvalidArgument, "SVM C must be > 0");

  SmoSolution sol;
  sol.alpha = Eigen::VectorXd::Zero(n);
  auto& alpha = sol.alpha;
  // gradient of 1/2 a'Qa - e'a with Q_ij = y_i y_j K_ij
  Eigen::VectorXd grad = Eigen::VectorXd::Constant(n, -1.0);
  auto q = [&](Eigen::Index i, Eigen::Index j) { return y(i) * y(j) * gram(i, j); };

  const long max_iter = std::max<long>(10'000'000, 100L * static_cast<long>(n));
  for (sol.iterations = 0; sol.iterations < max_iter; ++sol.iterations) {
    double gmax = -kInf;
    Eigen::Index i = -1;
    for (Eigen::Index t = 0; t < n; ++t) {
      if (in_up(y(t), alpha(t), c) && (i < 0 || -y(t) * grad(t) > gmax)) {
        gmax = -y(t) * grad(t);
        i = t;
      }
    }
    double gmin = kInf;
    Eigen::Index j = -1;
    double best_obj = kInf;
    for (Eigen::Index t = 0; t < n; ++t) {
      if (!in_low(y(t), alpha(t), c)) continue;
      const double v = -y(t) * grad(t);
      gmin = std::min(gmin, v);
      if (i >= 0 && v < gmax) {
        const double b = gmax - v;
        double a = gram(i, i) + gram(t, t) - 2.0 * gram(i, t);
        if (a <= 0) a = kTau;
        const double obj = -(b * b) / a;
        if (obj < best_obj) {
          best_obj = obj;
          j = t;
        }
      }
    }
    if (i < 0 || j < 0 || gmax - gmin <= tolerance) {
      sol.converged = true;
      break;
    }

    const double old_ai = alpha(i);
    const double old_aj = alpha(j);
    if (y(i) != y(j)) {
      double quad = q(i, i) + q(j, j) + 2.0 * q(i, j);
      if (quad <= 0) quad = kTau;
      const double delta = (-grad(i) - grad(j)) / quad;
      const double diff = alpha(i) - alpha(j);
      alpha(i) += delta;
      alpha(j) += delta;
      if (diff > 0) {
        if (alpha(j) < 0) {
          alpha(j) = 0;
          alpha(i) = diff;
        }
      } else if (alpha(i) < 0) {
        alpha(i) = 0;
        alpha(j) = -diff;
      }
      if (diff > 0) {
        if (alpha(i) > c) {
          alpha(i) = c;
          alpha(j) = c - diff;
        }
      } else if (alpha(j) > c) {
        alpha(j) = c;
        alpha(i) = c + diff;
      }
    } else {
      double quad = q(i, i) + q(j, j) - 2.0 * q(i, j);
      if (quad <= 0) quad = kTau;
      const double delta = (grad(i) - grad(j)) / quad;
      const double sum = alpha(i) + alpha(j);
      alpha(i) -= delta;
      alpha(j) += delta;
      if (sum > c) {
        if (alpha(i) > c) {
          alpha(i) = c;
          alpha(j) = sum - c;
        }
      } else if (alpha(j) < 0) {
        alpha(j) = 0;
        alpha(i) = sum;
      }
      if (sum > c) {
        if (alpha(j) > c) {
          alpha(j) = c;
          alpha(i) = sum - c;
        }
      } else if (alpha(i) < 0) {
        alpha(i) = 0;
        alpha(j) = sum;
      }
    }
    const double di = alpha(i) - old_ai;
    const double dj = alpha(j) - old_aj;
    for (Eigen::Index t = 0; t < n; ++t) grad(t) += q(t, i) * di + q(t, j) * dj;
  }

  // rho from free variables, else the midpoint of the feasible interval
  double ub = kInf, lb = -kInf, sum_free = 0.0;
  int free_count = 0;
  for (Eigen::Index t = 0; t < n; ++t) {
    const double yg = y(t) * grad(t);
    if (alpha(t) >= c) {
      if (y(t) < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else if (alpha(t) <= 0) {
      if (y(t) > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else {
      ++free_count;
      sum_free += yg;
    }
  }
  const double rho = free_count > 0 ? sum_free / free_count : (ub + lb) / 2.0;
  sol.bias = -rho;
  return sol;
}

double kkt_violation(const Eigen::MatrixXd& gram, const Eigen::VectorXd& y, const SmoSolution& sol, double c) {
  const Eigen::VectorXd f = gram * sol.alpha.cwiseProduct(y) + Eigen::VectorXd::Constant(y.size(), sol.bias);
  double worst = 0.0;
  for (Eigen::Index t = 0; t < y.size(); ++t) {
    const double margin = y(t) * f(t) - 1.0;
    double v = 0.0;
    if (sol.alpha(t) <= 0) {
      v = std::max(0.0, -margin);
    } else if (sol.alpha(t) >= c) {
      v = std::max(0.0, margin);
    } else {
      v = std::abs(margin);
    }
    worst = std::max(worst, v);
  }
  return worst;
}

double BinaryMachine::decision(const Kernel& kernel, const Eigen::Ref<const Eigen::VectorXd>& x) const {
  double f = bias;
  for (Eigen::Index i = 0; i < support_vectors.rows(); ++i) {
    f += coefficients(i) * kernel(support_vectors.row(i).transpose(), x);
  }
  return f;
}

Eigen::VectorXi SvmModel::votes(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  Eigen::VectorXi v = Eigen::VectorXi::Zero(class_count);
  for (const auto& m : machines) {
    ++v(m.decision(kernel, x) > 0.0 ? m.positive : m.negative);
  }
  return v;
}

int SvmModel::predict(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  const Eigen::VectorXi v = votes(x);
  int best = 0;
  for (int k = 1; k < class_count; ++k) {
    if (v(k) > v(best)) best = k;
  }
  return best;
}

SvmModel fit_svm(const TaskTable& table, const SvmParams& params) {
  if (!(params.c > 0.0)) throw Error(ErrorKind::InvalidArgument, "SVM C must be > 0");
  if (!table.features().allFinite()) throw Error(ErrorKind::InvalidArgument, "SVM requires finite (imputed) features");
  const auto& x = table.features();
  const auto k = static_cast<int>(table.class_count());

  SvmModel model;
  model.kernel = params.kernel;
  if (model.kernel.gamma <= 0.0) model.kernel.gamma = 1.0 / static_cast<double>(x.cols());
  model.class_count = k;

  std::vector<std::vector<Eigen::Index>> rows(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < table.labels().size(); ++i) {
    rows[static_cast<std::size_t>(table.labels()[i])].push_back(static_cast<Eigen::Index>(i));
  }
  int present = 0;
  for (const auto& r : rows) present += r.empty() ? 0 : 1;
  if (present < 2) throw Error(ErrorKind::SingleClass, "SVM needs at least two classes");

  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      const auto& ra = rows[static_cast<std::size_t>(a)];
      const auto& rb = rows[static_cast<std::size_t>(b)];
      if (ra.empty() || rb.empty()) continue;
      std::vector<Eigen::Index> idx(ra);
      idx.insert(idx.end(), rb.begin(), rb.end());
      const auto m = static_cast<Eigen::Index>(idx.size());
      Eigen::MatrixXd pts(m, x.cols());
      Eigen::VectorXd y(m);
      for (Eigen::Index t = 0; t < m; ++t) {
        pts.row(t) = x.row(idx[static_cast<std::size_t>(t)]);
        y(t) = t < static_cast<Eigen::Index>(ra.size()) ? 1.0 : -1.0;
      }
      Eigen::MatrixXd gram(m, m);
      for (Eigen::Index s = 0; s < m; ++s) {
        for (Eigen::Index t = s; t < m; ++t) {
          gram(s, t) = gram(t, s) = model.kernel(pts.row(s).transpose(), pts.row(t).transpose());
        }
      }
      const auto sol = solve_smo(gram, y, params.c, params.tolerance);

      BinaryMachine machine;
      machine.positive = a;
      machine.negative = b;
      machine.bias = sol.bias;
      std::vector<Eigen::Index> sv;
      for (Eigen::Index t = 0; t < m; ++t) {
        if (sol.alpha(t) > 0.0) sv.push_back(t);
      }
      machine.support_vectors.resize(static_cast<Eigen::Index>(sv.size()), x.cols());
      machine.coefficients.resize(static_cast<Eigen::Index>(sv.size()));
      for (std::size_t s = 0; s < sv.size(); ++s) {
        machine.support_vectors.row(static_cast<Eigen::Index>(s)) = pts.row(sv[s]);
        machine.coefficients(static_cast<Eigen::Index>(s)) = sol.alpha(sv[s]) * y(sv[s]);
      }
      model.machines.push_back(std::move(machine));
    }
  }
  return model;
}

}  // namespace honeyclf
