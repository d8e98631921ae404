#include "honeyclf/classifiers/discriminant.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "honeyclf/error.hpp"
#include "honeyclf/numerics.hpp"

namespace honeyclf {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct ClassRows {
  std::vector<std::vector<Eigen::Index>> rows;
  std::size_t present = 0;
};

ClassRows group_rows(const TaskTable& table) {
  ClassRows out;
  out.rows.resize(table.class_count());
  for (std::size_t i = 0; i < table.labels().size(); ++i) {
    out.rows[static_cast<std::size_t>(table.labels()[i])].push_back(static_cast<Eigen::Index>(i));
  }
  for (const auto& r : out.rows) out.present += r.empty() ? 0 : 1;
  return out;
}

Eigen::MatrixXd gather(const Eigen::MatrixXd& x, const std::vector<Eigen::Index>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = x.row(rows[i]);
  return out;
}

void check_finite(const TaskTable& table) {
  if (!table.features().allFinite()) {
    throw Error(ErrorKind::InvalidArgument, "discriminant fit requires finite (imputed) features");
  }
}

}  // namespace

int argmax_lowest(const Eigen::Ref<const Eigen::VectorXd>& scores) {
  int best = 0;
  for (Eigen::Index k = 1; k < scores.size(); ++k) {
    if (scores(k) > scores(best)) best = static_cast<int>(k);
  }
  return best;
}

Eigen::VectorXd LinearDiscriminant::scores(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return weights * x + offsets;
}

Eigen::VectorXd QuadraticDiscriminant::scores(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  Eigen::VectorXd out(means.rows());
  for (Eigen::Index k = 0; k < means.rows(); ++k) {
    const auto& l = factors[static_cast<std::size_t>(k)];
    if (priors(k) <= 0.0 || l.size() == 0) {
      out(k) = kNegInf;
      continue;
    }
    const Eigen::VectorXd z = l.triangularView<Eigen::Lower>().solve(x - means.row(k).transpose());
    out(k) = -0.5 * log_dets(k) - 0.5 * z.squaredNorm() + std::log(priors(k));
  }
  return out;
}

LinearDiscriminant fit_lda(const TaskTable& table, const DiscriminantParams& params) {
  check_finite(table);
  const auto groups = group_rows(table);
  const auto k = static_cast<Eigen::Index>(table.class_count());
  const auto d = table.dims();
  const auto n = table.rows();
  if (groups.present < 2) throw Error(ErrorKind::SingleClass, "LDA needs at least two classes");
  if (n <= static_cast<Eigen::Index>(groups.present)) {
    throw Error(ErrorKind::InsufficientClassSamples,
                fmt::format("LDA needs more rows ({}) than classes ({})", n, groups.present));
  }

  LinearDiscriminant m;
  m.means = Eigen::MatrixXd::Zero(k, d);
  m.priors = Eigen::VectorXd::Zero(k);
  m.pooled = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index c = 0; c < k; ++c) {
    const auto& rows = groups.rows[static_cast<std::size_t>(c)];
    if (rows.empty()) continue;
    if (rows.size() < 2) {
      throw Error(ErrorKind::InsufficientClassSamples,
                  fmt::format("class '{}' has 1 sample; LDA needs >= 2", table.classes()[static_cast<std::size_t>(c)]));
    }
    const Eigen::MatrixXd xc = gather(table.features(), rows);
    m.means.row(c) = xc.colwise().mean();
    m.priors(c) = static_cast<double>(rows.size()) / static_cast<double>(n);
    m.pooled += numerics::covariance(xc) * static_cast<double>(rows.size() - 1);
  }
  m.pooled /= static_cast<double>(n - static_cast<Eigen::Index>(groups.present));
  m.pooled = (m.pooled + m.pooled.transpose()) / 2.0;

  auto factor = numerics::regularized_cholesky(m.pooled, params.ridge_start, params.ridge_limit);
  m.ridge = factor.ridge;
  m.weights = Eigen::MatrixXd::Zero(k, d);
  m.offsets = Eigen::VectorXd::Constant(k, kNegInf);
  for (Eigen::Index c = 0; c < k; ++c) {
    if (m.priors(c) <= 0.0) continue;
    const Eigen::VectorXd mu = m.means.row(c).transpose();
    const Eigen::VectorXd w = factor.llt.solve(mu);
    m.weights.row(c) = w.transpose();
    m.offsets(c) = -0.5 * mu.dot(w) + std::log(m.priors(c));
  }
  return m;
}

QuadraticDiscriminant fit_qda(const TaskTable& table, const DiscriminantParams& params) {
  check_finite(table);
  const auto groups = group_rows(table);
  const auto k = static_cast<Eigen::Index>(table.class_count());
  const auto d = table.dims();
  const auto n = table.rows();
  if (groups.present < 2) throw Error(ErrorKind::SingleClass, "QDA needs at least two classes");

  QuadraticDiscriminant m;
  m.means = Eigen::MatrixXd::Zero(k, d);
  m.priors = Eigen::VectorXd::Zero(k);
  m.factors.resize(static_cast<std::size_t>(k));
  m.ridges = Eigen::VectorXd::Zero(k);
  m.log_dets = Eigen::VectorXd::Zero(k);
  for (Eigen::Index c = 0; c < k; ++c) {
    const auto& rows = groups.rows[static_cast<std::size_t>(c)];
    if (rows.empty()) continue;
    if (rows.size() < 2) {
      throw Error(ErrorKind::InsufficientClassSamples,
                  fmt::format("class '{}' has {} sample(s); QDA needs >= 2 per class",
                              table.classes()[static_cast<std::size_t>(c)], rows.size()));
    }
    const Eigen::MatrixXd xc = gather(table.features(), rows);
    m.means.row(c) = xc.colwise().mean();
    m.priors(c) = static_cast<double>(rows.size()) / static_cast<double>(n);
    auto factor = numerics::regularized_cholesky(numerics::covariance(xc), params.ridge_start, params.ridge_limit);
    m.ridges(c) = factor.ridge;
    m.log_dets(c) = numerics::log_det(factor.llt);
    m.factors[static_cast<std::size_t>(c)] = factor.llt.matrixL();
  }
  return m;
}

}  // namespace honeyclf
