#include <gtest/gtest.h>

#include <random>

#include "honeyclf/error.hpp"
#include "honeyclf/numerics.hpp"
#include "honeyclf/random.hpp"

using namespace honeyclf;
namespace nx = honeyclf::numerics;

TEST(Numerics, CovarianceOfPerfectlyCorrelated) {
  Eigen::MatrixXd x(3, 2);
  x << 1, 1,
       2, 2,
       3, 3;
  const auto c = nx::covariance(x);
  EXPECT_NEAR(c(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(c(0, 1), 1.0, 1e-15);
  EXPECT_NEAR(c(1, 1), 1.0, 1e-15);
}

TEST(Numerics, CovarianceTwoRows) {
  Eigen::MatrixXd x(2, 2);
  x << 0, 0,
       2, 2;
  const auto c = nx::covariance(x);
  EXPECT_DOUBLE_EQ(c(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(c(1, 0), 2.0);
}

TEST(Numerics, CovarianceNeedsTwoRows) {
  Eigen::MatrixXd x(1, 3);
  x.setOnes();
  try {
    nx::covariance(x);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InsufficientRows);
  }
}

TEST(Numerics, CovarianceFloatInstantiation) {
  Eigen::MatrixXf x(3, 1);
  x << 1, 2, 3;
  EXPECT_FLOAT_EQ(nx::covariance(x)(0, 0), 1.0f);
}

TEST(Numerics, SolveSpdKnownSystem) {
  Eigen::Matrix2d a;
  a << 4, 2,
       2, 3;
  Eigen::Vector2d b(2, 1);
  const auto x = nx::solve_spd(a, b);
  EXPECT_NEAR(x(0), 0.5, 1e-12);
  EXPECT_NEAR(x(1), 0.0, 1e-12);
}

TEST(Numerics, ZeroMatrixNotPositiveDefinite) {
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(3, 3);
  try {
    nx::cholesky(z, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotPositiveDefinite);
  }
}

TEST(Numerics, RidgeRescuesSingular) {
  Eigen::MatrixXd a(2, 2);
  a << 1, 1,
       1, 1;
  const auto f = nx::regularized_cholesky(a);
  EXPECT_NEAR(f.ridge, 1e-6, 1e-18);
}

TEST(Numerics, RidgeOnZeroMatrixUsesUnitScale) {
  const auto f = nx::regularized_cholesky(Eigen::MatrixXd::Zero(2, 2).eval());
  EXPECT_NEAR(f.ridge, 1e-6, 1e-18);
  EXPECT_NEAR(nx::log_det<double>(f.llt), 2.0 * std::log(1e-6), 1e-9);
}

TEST(Numerics, LogDetMatchesDeterminant) {
  Eigen::Matrix3d a;
  a << 4, 1, 0,
       1, 3, 1,
       0, 1, 2;
  const auto llt = nx::cholesky(Eigen::MatrixXd(a), 0.0);
  EXPECT_NEAR(nx::log_det<double>(llt), std::log(a.determinant()), 1e-12);
}

TEST(Numerics, RandomSpdResidualIsSmall) {
  std::mt19937 gen(7);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 + trial % 9;
    Eigen::MatrixXd m(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m(i, j) = g(gen);
    const Eigen::MatrixXd a = m * m.transpose() + Eigen::MatrixXd::Identity(d, d);
    Eigen::VectorXd b(d);
    for (int i = 0; i < d; ++i) b(i) = g(gen);
    const auto x = nx::solve_spd(a, b);
    EXPECT_LE((a * x - b).norm() / b.norm(), 1e-10);
  }
}

TEST(Numerics, SoftmaxUniformAndStable) {
  Eigen::Vector3d z(0, 0, 0);
  const auto p = nx::softmax(z);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(p(i), 1.0 / 3.0, 1e-15);

  Eigen::Vector2d big(1000, 0);
  const auto q = nx::softmax(big);
  EXPECT_TRUE(q.allFinite());
  EXPECT_NEAR(q(0), 1.0, 1e-15);

  Eigen::Vector2d shifted(1000 + 1, 1000);
  Eigen::Vector2d base(1, 0);
  EXPECT_NEAR((nx::softmax(shifted) - nx::softmax(base)).norm(), 0.0, 1e-15);
}

TEST(Random, DeterministicAndPermutation) {
  Rng a(5), b(5);
  std::vector<int> va(30), vb(30);
  for (int i = 0; i < 30; ++i) va[static_cast<std::size_t>(i)] = vb[static_cast<std::size_t>(i)] = i;
  a.shuffle(va);
  b.shuffle(vb);
  EXPECT_EQ(va, vb);
  auto sorted = va;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 30; ++i) EXPECT_EQ(sorted[static_cast<std::size_t>(i)], i);
  Rng c(6);
  std::vector<int> vc(vb.size());
  for (int i = 0; i < 30; ++i) vc[static_cast<std::size_t>(i)] = i;
  c.shuffle(vc);
  EXPECT_NE(vc, va);
}

TEST(Random, IndexInRange) {
  Rng r(1);
  for (int i = 0; i < 1000; ++i) EXPECT_LT(r.index(7), 7u);
}
