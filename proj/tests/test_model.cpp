#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "honeyclf/error.hpp"
#include "honeyclf/model.hpp"
#include "test_util.hpp"

using namespace honeyclf;

TEST(Model, ParseAlgorithms) {
  EXPECT_EQ(parse_algorithm("rf"), Algorithm::RandomForest);
  EXPECT_EQ(parse_algorithm("LR"), Algorithm::LogisticRegression);
  EXPECT_EQ(parse_algorithms("all").size(), 6u);
  EXPECT_EQ(parse_algorithms("SVM, QDA"), (std::vector<Algorithm>{Algorithm::SVM, Algorithm::QDA}));
  EXPECT_THROW(parse_algorithm("knn"), Error);
}

TEST(Model, OverridesApplyAndValidate) {
  std::istringstream in("svm.c = 4\nsvm.kernel = rbf\nforest.trees = 17\ntree.max_depth = 3\n");
  ModelSpec s;
  s.apply_overrides(KeyValueConfig::parse(in));
  EXPECT_DOUBLE_EQ(s.svm.c, 4.0);
  EXPECT_EQ(s.svm.kernel.type, KernelType::Rbf);
  EXPECT_EQ(s.forest.trees, 17);
  EXPECT_EQ(s.tree.max_depth, 3);

  s.algorithm = Algorithm::SVM;
  s.svm.c = -1;
  EXPECT_THROW(s.validate(), Error);
}

TEST(Model, SpecJsonRoundTrip) {
  ModelSpec s;
  s.algorithm = Algorithm::SVM;
  s.svm.kernel.type = KernelType::Polynomial;
  s.svm.kernel.degree = 2;
  s.seed = 99;
  const auto back = ModelSpec::from_json(s.to_json());
  EXPECT_EQ(back.hyperparameters(), s.hyperparameters());
  EXPECT_EQ(back.seed, 99u);
  EXPECT_EQ(back.algorithm, Algorithm::SVM);
}

TEST(Model, EveryAlgorithmPredictsKnownClasses) {
  const auto t = honeyclf::testing::blobs(3, 15, 3, 0.4, 6);
  for (Algorithm a : kAllAlgorithms) {
    ModelSpec s;
    s.algorithm = a;
    s.forest.trees = 15;
    const auto m = fit(t, s);
    const auto predicted = m.predict_batch(t.features());
    ASSERT_EQ(predicted.size(), static_cast<std::size_t>(t.rows()));
    int correct = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
      EXPECT_NE(std::find(t.classes().begin(), t.classes().end(), predicted[i]), t.classes().end());
      correct += predicted[i] == t.classes()[static_cast<std::size_t>(t.labels()[i])];
    }
    EXPECT_GE(correct, 40) << short_name(a);
  }
}

TEST(Model, DimensionMismatch) {
  const auto t = honeyclf::testing::blobs(2, 10, 3, 0.4, 6);
  ModelSpec s;
  s.algorithm = Algorithm::LDA;
  const auto m = fit(t, s);
  try {
    m.predict(Eigen::Vector2d(0, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
}

TEST(Model, SerializeRoundTripPredictsIdentically) {
  const auto t = honeyclf::testing::blobs(4, 12, 3, 0.8, 14);
  // a table with a class absent from training exercises the -inf offsets
  std::vector<int> labels = t.labels();
  const TaskTable gapped(t.features(), labels, {"A", "B", "C", "D", "E"});
  std::mt19937 gen(5);
  std::uniform_real_distribution<double> u(-4, 4);
  for (Algorithm a : kAllAlgorithms) {
    for (const TaskTable* table : {&t, &gapped}) {
      ModelSpec s;
      s.algorithm = a;
      s.forest.trees = 10;
      const auto m = fit(*table, s);
      const auto text = m.serialize();
      const auto back = TrainedModel::load(text);
      EXPECT_EQ(back.serialize(), text) << short_name(a);
      for (int i = 0; i < 100; ++i) {
        Eigen::Vector3d x(u(gen), u(gen), u(gen));
        EXPECT_EQ(back.predict_index(x), m.predict_index(x)) << short_name(a);
      }
    }
  }
}

TEST(Model, LoadRejectsGarbage) {
  EXPECT_THROW(TrainedModel::load("not json"), Error);
  EXPECT_THROW(TrainedModel::load("{\"format\": \"other\"}"), Error);
}
