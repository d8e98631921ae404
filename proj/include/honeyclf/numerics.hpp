#pragma once

#include <cmath>
#include <optional>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "honeyclf/error.hpp"

namespace honeyclf::numerics {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Unbiased sample covariance of the rows (divisor n - 1), exactly symmetric.
template <typename Derived>
Matrix<typename Derived::Scalar> covariance(const Eigen::MatrixBase<Derived>& rows) {
  using Scalar = typename Derived::Scalar;
  if (rows.rows() < 2) {
    throw Error(ErrorKind::InsufficientRows, fmt::format("covariance needs >= 2 rows, got {}", rows.rows()));
  }
  const Vector<Scalar> mean = rows.colwise().mean().transpose();
  const Matrix<Scalar> centered = rows.rowwise() - mean.transpose();
  Matrix<Scalar> cov = (centered.transpose() * centered) / static_cast<Scalar>(rows.rows() - 1);
  return (cov + cov.transpose()) / Scalar(2);
}

/// Cholesky factor of A + ridge*I. Throws NotPositiveDefinite when it does not exist.
template <typename Derived>
Eigen::LLT<Matrix<typename Derived::Scalar>> cholesky(const Eigen::MatrixBase<Derived>& a,
                                                      typename Derived::Scalar ridge) {
  using Scalar = typename Derived::Scalar;
  if (a.rows() != a.cols()) throw Error(ErrorKind::DimensionMismatch, "cholesky needs a square matrix");
  Matrix<Scalar> shifted = a;
  shifted.diagonal().array() += ridge;
  Eigen::LLT<Matrix<Scalar>> llt(shifted);
  const bool ok = llt.info() == Eigen::Success && (llt.matrixLLT().diagonal().array() > Scalar(0)).all() &&
                  llt.matrixLLT().diagonal().allFinite();
  if (!ok) throw Error(ErrorKind::NotPositiveDefinite, fmt::format("matrix + {}*I is not positive definite", ridge));
  return llt;
}

/// Solves (A + ridge*I) x = b through a Cholesky factorization.
template <typename DerivedA, typename DerivedB>
Vector<typename DerivedA::Scalar> solve_spd(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b,
                                            typename DerivedA::Scalar ridge = 0) {
  if (b.size() != a.rows()) throw Error(ErrorKind::DimensionMismatch, "solve_spd: rhs length differs from matrix size");
  return cholesky(a, ridge).solve(b.derived());
}

template <typename Scalar>
Scalar log_det(const Eigen::LLT<Matrix<Scalar>>& llt) {
  return Scalar(2) * llt.matrixLLT().diagonal().array().log().sum();
}

/// Factorization that succeeded under the escalating ridge policy.
template <typename Scalar>
struct RidgedFactor {
  Eigen::LLT<Matrix<Scalar>> llt;
  Scalar ridge;
};

/// Tries ridge = 1e-6 * trace/d, then x10 steps up to 1e-2 * trace/d.
/// A zero-trace matrix uses an absolute scale of 1.
template <typename Derived>
RidgedFactor<typename Derived::Scalar> regularized_cholesky(const Eigen::MatrixBase<Derived>& a,
                                                            typename Derived::Scalar start = 1e-6,
                                                            typename Derived::Scalar limit = 1e-2) {
  using Scalar = typename Derived::Scalar;
  const Scalar d = static_cast<Scalar>(a.rows());
  Scalar scale = a.trace() / d;
  if (!(scale > Scalar(0))) scale = Scalar(1);
  for (Scalar factor = start; factor <= limit * Scalar(1.0000001); factor *= Scalar(10)) {
    try {
      auto llt = cholesky(a, factor * scale);
      return {std::move(llt), factor * scale};
    } catch (const Error&) {
    }
  }
  throw Error(ErrorKind::NotPositiveDefinite,
              fmt::format("matrix not positive definite even with ridge {}", limit * scale));
}

/// Numerically stable softmax (max subtracted before exponentiation).
template <typename Derived>
Vector<typename Derived::Scalar> softmax(const Eigen::MatrixBase<Derived>& logits) {
  using Scalar = typename Derived::Scalar;
  const Scalar top = logits.maxCoeff();
  Vector<Scalar> e = (logits.array() - top).exp().matrix();
  return e / e.sum();
}

}  // namespace honeyclf::numerics
