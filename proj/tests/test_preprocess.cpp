#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "honeyclf/error.hpp"
#include "honeyclf/preprocess.hpp"
#include "test_util.hpp"

using namespace honeyclf;

namespace {

TaskTable small_table() {
  Eigen::MatrixXd x(4, 2);
  x << 1, 5,
       3, 5,
       2, 5,
       5, 5;
  return TaskTable::from_names(x, {"A", "A", "B", "B"});
}

}  // namespace

TEST(Scaler, FitOnAllRows) {
  const auto t = small_table();
  const auto s = fit_scaler(t);
  EXPECT_DOUBLE_EQ(s.min()(0), 1.0);
  EXPECT_DOUBLE_EQ(s.max()(0), 5.0);
  const auto scaled = apply_scaler(s, t).features();
  EXPECT_DOUBLE_EQ(scaled(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(scaled(3, 0), 1.0);
  EXPECT_DOUBLE_EQ(scaled(1, 0), 0.5);
  // constant column maps to zero
  EXPECT_TRUE((scaled.col(1).array() == 0.0).all());
}

TEST(Scaler, FitOnSubsetDoesNotClamp) {
  const auto t = small_table();
  const auto s = fit_scaler(t, {0, 1});
  EXPECT_EQ(s.fitted_on(), (std::vector<std::string>{"1", "2"}));
  const auto scaled = apply_scaler(s, t).features();
  EXPECT_DOUBLE_EQ(scaled(3, 0), 2.0);
  EXPECT_DOUBLE_EQ(scaled(2, 0), 0.5);
}

TEST(Scaler, EmptyRowSet) {
  try {
    fit_scaler(small_table(), {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyRowSet);
  }
}

TEST(Scaler, RejectsMissing) {
  Eigen::MatrixXd x(2, 1);
  x << 1, TaskTable::missing();
  const auto t = TaskTable::from_names(x, {"A", "B"});
  EXPECT_THROW(fit_scaler(t), Error);
}

TEST(Scaler, TrainingRowsLandInUnitInterval) {
  const auto t = honeyclf::testing::blobs(3, 20, 5, 3.0, 11);
  std::vector<Eigen::Index> rows;
  for (Eigen::Index i = 0; i < t.rows(); i += 2) rows.push_back(i);
  const auto s = fit_scaler(t, rows);
  const auto scaled = apply_scaler(s, t).features();
  for (auto r : rows) {
    EXPECT_TRUE((scaled.row(r).array() >= 0.0).all());
    EXPECT_TRUE((scaled.row(r).array() <= 1.0).all());
  }
}

TEST(Scaler, ArtifactListsMinMaxAndRows) {
  const auto s = fit_scaler(small_table());
  std::ostringstream out;
  s.write(out);
  const auto text = out.str();
  EXPECT_NE(text.find("min"), std::string::npos);
  EXPECT_NE(text.find("max"), std::string::npos);
  EXPECT_NE(text.find("fitted_rows = 4"), std::string::npos);
}

TEST(Impute, MissingBecomesZero) {
  Eigen::MatrixXd x(3, 2);
  x << 1, TaskTable::missing(),
       TaskTable::missing(), 2,
       3, 4;
  const auto t = impute_missing(TaskTable::from_names(x, {"A", "B", "B"}));
  EXPECT_EQ(t.missing_count(), 0u);
  EXPECT_DOUBLE_EQ(t.features()(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(t.features()(1, 0), 0.0);
  EXPECT_DOUBLE_EQ(t.features()(2, 1), 4.0);
}

TEST(Preprocess, ParseMode) {
  EXPECT_EQ(parse_preprocess_mode("global"), PreprocessMode::GlobalFit);
  EXPECT_EQ(parse_preprocess_mode("per-fold"), PreprocessMode::PerFoldFit);
  EXPECT_THROW(parse_preprocess_mode("sometimes"), Error);
}
