#include <gtest/gtest.h>

#include <random>
#include <set>

#include <fmt/format.h>

#include "honeyclf/error.hpp"
#include "honeyclf/evaluation.hpp"
#include "test_util.hpp"

using namespace honeyclf;

namespace {

TaskTable labels_only(const std::vector<int>& labels, int k) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(labels.size()), 1);
  for (Eigen::Index i = 0; i < x.rows(); ++i) x(i, 0) = static_cast<double>(i);
  std::vector<std::string> classes;
  for (int c = 0; c < k; ++c) classes.push_back(fmt::format("c{:02}", c));
  return TaskTable(x, labels, classes);
}

}  // namespace

TEST(Folds, FourHundredTwentyNineIntoTen) {
  const auto t = build_task(honeyclf::testing::fixture(), TaskKind::Botanical);
  const auto f = stratified_folds(t, 10, 42);
  auto sizes = f.fold_sizes();
  std::sort(sizes.begin(), sizes.end());
  EXPECT_EQ(sizes.front(), 42u);
  EXPECT_EQ(sizes.back(), 43u);
  EXPECT_EQ(std::count(sizes.begin(), sizes.end(), 43u), 9);
}

TEST(Folds, StratificationBoundsOnRandomLabels) {
  std::mt19937 gen(50);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 2 + trial % 9;
    const int classes = 2 + trial % 5;
    std::uniform_int_distribution<int> lab(0, classes - 1), size(k, 200);
    std::vector<int> labels(static_cast<std::size_t>(size(gen)));
    for (auto& y : labels) y = lab(gen);
    labels[0] = 0;
    labels[1] = 1;
    const auto t = labels_only(labels, classes);
    const auto f = stratified_folds(t, k, static_cast<std::uint64_t>(trial));

    // every row in exactly one fold
    for (int fold : f.fold) {
      EXPECT_GE(fold, 0);
      EXPECT_LT(fold, k);
    }
    const auto sizes = f.fold_sizes();
    const auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());
    EXPECT_LE(*hi - *lo, 1u);
    const auto support = t.class_support();
    for (int c = 0; c < classes; ++c) {
      std::vector<std::size_t> per_fold(static_cast<std::size_t>(k), 0);
      for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == c) ++per_fold[static_cast<std::size_t>(f.fold[i])];
      const auto n = support[static_cast<std::size_t>(c)];
      for (auto cnt : per_fold) {
        EXPECT_GE(cnt, n / static_cast<std::size_t>(k));
        EXPECT_LE(cnt, (n + static_cast<std::size_t>(k) - 1) / static_cast<std::size_t>(k));
      }
    }
    // deterministic
    EXPECT_EQ(stratified_folds(t, k, static_cast<std::uint64_t>(trial)).fold, f.fold);
  }
}

TEST(Folds, SmallClassWarnsAndTooFewRowsFails) {
  const auto t = labels_only({0, 0, 0, 0, 0, 1, 1}, 2);
  const auto f = stratified_folds(t, 3, 1);
  EXPECT_EQ(f.warnings.size(), 1u);
  try {
    stratified_folds(t, 8, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::TooFewSamples);
  }
  EXPECT_THROW(stratified_folds(t, 1, 1), Error);
}

TEST(Confusion, ComputedFromLabels) {
  const std::vector<std::string> classes = {"A", "B", "C"};
  const auto cm = compute_confusion(std::vector<std::string>{"A", "A", "B", "C"},
                                    std::vector<std::string>{"A", "B", "B", "A"}, classes);
  EXPECT_EQ(cm.counts()(0, 0), 1);
  EXPECT_EQ(cm.counts()(0, 1), 1);
  EXPECT_EQ(cm.counts()(2, 0), 1);
  EXPECT_EQ(cm.total(), 4);
  EXPECT_THROW(compute_confusion(std::vector<std::string>{"A"}, std::vector<std::string>{"Z"}, classes), Error);
  EXPECT_THROW(compute_confusion(std::vector<int>{0}, std::vector<int>{}, classes), Error);
}

TEST(Metrics, PerfectPredictionYieldsOnes) {
  ConfusionMatrix::Counts c(2, 2);
  c << 5, 0,
       0, 3;
  const ConfusionMatrix cm({"A", "B"}, c);
  const auto m = per_class_metrics(cm);
  for (const auto& x : m) {
    EXPECT_DOUBLE_EQ(x.tp_rate, 1.0);
    EXPECT_DOUBLE_EQ(x.fp_rate, 0.0);
    EXPECT_DOUBLE_EQ(*x.precision, 1.0);
    EXPECT_DOUBLE_EQ(*x.f_measure, 1.0);
  }
  const auto agg = aggregate_metrics(m, cm);
  EXPECT_DOUBLE_EQ(agg.accuracy, 100.0);
}

TEST(Metrics, HandComputedExample) {
  ConfusionMatrix::Counts c(2, 2);
  c << 3, 1,
       2, 4;
  const ConfusionMatrix cm({"A", "B"}, c);
  const auto m = per_class_metrics(cm);
  EXPECT_DOUBLE_EQ(m[0].tp_rate, 0.75);
  EXPECT_DOUBLE_EQ(m[0].fp_rate, 2.0 / 6.0);
  EXPECT_DOUBLE_EQ(*m[0].precision, 0.6);
  EXPECT_NEAR(*m[0].f_measure, 2 * 0.6 * 0.75 / 1.35, 1e-15);
  const auto agg = aggregate_metrics(m, cm);
  EXPECT_DOUBLE_EQ(agg.accuracy, 70.0);
  EXPECT_NEAR(agg.recall, 0.7, 1e-15);
  EXPECT_NEAR(*agg.precision, 0.4 * 0.6 + 0.6 * 0.8, 1e-15);
  const auto macro = aggregate_metrics(m, cm, Averaging::Macro);
  EXPECT_NEAR(macro.recall, (0.75 + 4.0 / 6.0) / 2, 1e-15);
}

TEST(Metrics, NeverPredictedClassHasUndefinedPrecision) {
  ConfusionMatrix::Counts c(3, 3);
  c << 2, 0, 0,
       1, 0, 0,
       0, 0, 3;
  const ConfusionMatrix cm({"A", "B", "C"}, c);
  const auto m = per_class_metrics(cm);
  EXPECT_FALSE(m[1].precision);
  EXPECT_FALSE(m[1].f_measure);
  const auto agg = aggregate_metrics(m, cm);
  EXPECT_FALSE(agg.precision);
  EXPECT_FALSE(agg.f_measure);
  EXPECT_NEAR(agg.recall, 5.0 / 6.0, 1e-15);
}

TEST(Metrics, IdentitiesOnRandomMatrices) {
  std::mt19937 gen(77);
  std::uniform_int_distribution<int> cell(0, 9), dim(2, 7);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = dim(gen);
    ConfusionMatrix::Counts c(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) c(i, j) = cell(gen);
    c(0, 0) += 1;
    std::vector<std::string> names;
    for (int i = 0; i < k; ++i) names.push_back(std::string(1, static_cast<char>('A' + i)));
    const ConfusionMatrix cm(names, c);
    const auto m = per_class_metrics(cm);
    const auto agg = aggregate_metrics(m, cm);
    // weighted recall equals accuracy
    EXPECT_NEAR(agg.recall * 100.0, agg.accuracy, 1e-9);
    for (int i = 0; i < k; ++i) {
      const auto& x = m[static_cast<std::size_t>(i)];
      EXPECT_EQ(x.support, c.row(i).sum());
      EXPECT_GE(x.tp_rate, 0.0);
      EXPECT_LE(x.tp_rate, 1.0);
      EXPECT_GE(x.fp_rate, 0.0);
      EXPECT_LE(x.fp_rate, 1.0);
      if (x.f_measure) {
        EXPECT_GE(*x.f_measure, std::min(*x.precision, x.recall) - 1e-12);
        EXPECT_LE(*x.f_measure, std::max(*x.precision, x.recall) + 1e-12);
      }
    }
  }
}

TEST(Metrics, EmptyMatrixRejected) {
  const ConfusionMatrix cm({"A", "B"});
  try {
    per_class_metrics(cm);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyMatrix);
  }
}

TEST(CrossValidation, PooledMatrixCoversEveryRowOnce) {
  const auto t = honeyclf::testing::blobs(3, 20, 3, 0.5, 10);
  ModelSpec s;
  s.algorithm = Algorithm::LDA;
  for (auto mode : {PreprocessMode::GlobalFit, PreprocessMode::PerFoldFit}) {
    const auto r = cross_validate(t, s, 10, 42, mode);
    EXPECT_EQ(r.confusion.total(), t.rows());
    EXPECT_EQ(r.predictions.size(), static_cast<std::size_t>(t.rows()));
    for (std::size_t i = 0; i < r.predictions.size(); ++i) {
      EXPECT_EQ(r.confusion.counts().row(t.labels()[i]).sum(), static_cast<long>(t.class_support()[static_cast<std::size_t>(t.labels()[i])]));
    }
    EXPECT_GT(r.aggregate.accuracy, 90.0);
  }
}

TEST(CrossValidation, TestRowsNeverSeenByLearner) {
  const auto t = honeyclf::testing::blobs(2, 15, 2, 0.5, 10);
  std::set<std::string> seen_in_training;
  std::vector<std::set<std::string>> per_fold;
  const Learner spy = [&](const TaskTable& train) -> Predictor {
    per_fold.emplace_back(train.row_ids().begin(), train.row_ids().end());
    return [](const Eigen::MatrixXd& x) { return std::vector<int>(static_cast<std::size_t>(x.rows()), 0); };
  };
  const auto r = cross_validate(t, spy, 5, 3, PreprocessMode::PerFoldFit);
  ASSERT_EQ(per_fold.size(), 5u);
  for (int f = 0; f < 5; ++f) {
    for (auto row : r.folds.test_rows(f)) {
      EXPECT_EQ(per_fold[static_cast<std::size_t>(f)].count(t.row_ids()[static_cast<std::size_t>(row)]), 0u);
    }
  }
}

TEST(CrossValidation, PerFoldScalingUsesTrainingRowsOnly) {
  // an extreme value held out in the test fold must not squash the training rows
  Eigen::MatrixXd x(10, 1);
  x << 0, 1, 2, 3, 1000, 0.5, 1.5, 2.5, 3.5, 4;
  const auto t = TaskTable::from_names(x, {"A", "A", "A", "A", "A", "B", "B", "B", "B", "B"});
  int checked = 0;
  auto run = [&](PreprocessMode mode) {
    double spread = 0.0;
    const Learner spy = [&](const TaskTable& train) -> Predictor {
      const auto& ids = train.row_ids();
      if (std::find(ids.begin(), ids.end(), "5") == ids.end()) {
        spread = train.features().maxCoeff() - train.features().minCoeff();
        ++checked;
      }
      return [](const Eigen::MatrixXd& m) { return std::vector<int>(static_cast<std::size_t>(m.rows()), 0); };
    };
    cross_validate(t, spy, 5, 1, mode);
    return spread;
  };
  EXPECT_DOUBLE_EQ(run(PreprocessMode::PerFoldFit), 1.0);
  EXPECT_LT(run(PreprocessMode::GlobalFit), 0.01);
  EXPECT_EQ(checked, 2);
}

TEST(CrossValidation, SameSeedSameReport) {
  const auto t = honeyclf::testing::blobs(3, 12, 3, 1.0, 10);
  ModelSpec s;
  s.algorithm = Algorithm::RandomForest;
  s.forest.trees = 20;
  const auto a = cross_validate(t, s, 4, 9, PreprocessMode::GlobalFit);
  const auto b = cross_validate(t, s, 4, 9, PreprocessMode::GlobalFit);
  EXPECT_EQ(a.predictions, b.predictions);
  EXPECT_EQ(a.confusion, b.confusion);
}
