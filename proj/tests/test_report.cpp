#include <gtest/gtest.h>

#include "honeyclf/error.hpp"
#include "honeyclf/report.hpp"
#include "test_util.hpp"

using namespace honeyclf;

namespace {

EvaluationReport fake_report(Algorithm a, double accuracy, std::optional<double> precision) {
  EvaluationReport r;
  r.spec.algorithm = a;
  r.aggregate.accuracy = accuracy;
  r.aggregate.precision = precision;
  r.aggregate.recall = accuracy / 100.0;
  r.aggregate.f_measure = precision;
  ConfusionMatrix::Counts c(2, 2);
  c << 4, 1,
       0, 5;
  r.confusion = ConfusionMatrix({"A", "B"}, c);
  r.per_class = per_class_metrics(r.confusion);
  return r;
}

}  // namespace

TEST(Format, FixedHalfUp) {
  EXPECT_EQ(format_fixed(100.0, 2), "100.00");
  EXPECT_EQ(format_fixed(97.666666, 2), "97.67");
  EXPECT_EQ(format_fixed(0.9935, 3), "0.994");
  EXPECT_EQ(format_fixed(0.0005, 3), "0.001");
  EXPECT_EQ(format_fixed(0.0, 3), "0.000");
  EXPECT_EQ(format_metric(std::nullopt), "?");
  EXPECT_EQ(format_metric(1.0), "1.000");
}

TEST(Format, ParseTableFormat) {
  EXPECT_EQ(parse_table_format("md"), TableFormat::Markdown);
  EXPECT_EQ(parse_table_format("tsv"), TableFormat::Delimited);
  EXPECT_EQ(parse_table_format("json"), TableFormat::Structured);
  EXPECT_THROW(parse_table_format("xlsx"), Error);
}

TEST(Comparison, SortedByAccuracyThenName) {
  std::vector<EvaluationReport> reports = {fake_report(Algorithm::SVM, 90, 0.9), fake_report(Algorithm::LDA, 95, 0.95),
                                           fake_report(Algorithm::DecisionTree, 90, 0.9)};
  const auto md = render_comparison(reports, TableFormat::Markdown);
  EXPECT_EQ(md.find("| ML Model | Accuracy | Precision | Recall | F-Measure |"), 0u) << md;
  const auto lda = md.find("| LDA |");
  const auto dt = md.find("| DT |");
  const auto svm = md.find("| SVM |");
  EXPECT_LT(lda, dt);
  EXPECT_LT(dt, svm);
  EXPECT_NE(md.find("| LDA | 95.00 | 0.950 | 0.950 | 0.950 |"), std::string::npos) << md;
}

TEST(Comparison, UndefinedShowsQuestionMarkAndErrorsAppended) {
  std::vector<EvaluationReport> reports = {fake_report(Algorithm::QDA, 80, std::nullopt), fake_report(Algorithm::LogisticRegression, 70, 0.7)};
  reports.push_back(fake_report(Algorithm::SVM, 0, 0));
  reports.back().error = "fold 3: boom";
  const auto tsv = render_comparison(reports, TableFormat::Delimited);
  EXPECT_NE(tsv.find("QDA\t80.00\t?\t0.800\t?"), std::string::npos) << tsv;
  EXPECT_GT(tsv.find("SVM\tERROR"), tsv.find("LR\t70.00"));
  const auto json = render_comparison(reports, TableFormat::Structured);
  EXPECT_NE(json.find("\"precision\": \"?\""), std::string::npos) << json;
  EXPECT_NE(json.find("fold 3: boom"), std::string::npos);
}

TEST(PerClass, HeaderAndValues) {
  const auto r = fake_report(Algorithm::RandomForest, 90, 0.9);
  const auto md = render_per_class(r, TableFormat::Markdown);
  EXPECT_EQ(md.find("| Class | TP Rate | FP Rate | Precision | Recall | F-Measure |"), 0u);
  EXPECT_NE(md.find("| A | 0.800 | 0.000 | 1.000 | 0.800 | 0.889 |"), std::string::npos) << md;
  EXPECT_NE(md.find("| B | 1.000 | 0.200 | 0.833 | 1.000 | 0.909 |"), std::string::npos) << md;
}

TEST(Chart, DeterministicAndNotesUndefined) {
  std::vector<EvaluationReport> reports = {fake_report(Algorithm::QDA, 80, std::nullopt), fake_report(Algorithm::LogisticRegression, 70, 0.7)};
  const auto a = render_chart(reports);
  EXPECT_EQ(a, render_chart(reports));
  EXPECT_EQ(a.rfind("<svg", 0), 0u);
  EXPECT_NE(a.find("? omitted"), std::string::npos);
  std::vector<EvaluationReport> defined = {fake_report(Algorithm::LogisticRegression, 70, 0.7)};
  EXPECT_EQ(render_chart(defined).find("? omitted"), std::string::npos);
}

TEST(ReportJson, RoundTripIsByteIdentical) {
  const auto t = honeyclf::testing::blobs(3, 10, 2, 0.5, 2);
  ModelSpec s;
  s.algorithm = Algorithm::QDA;
  auto r = cross_validate(t, s, 5, 42, PreprocessMode::GlobalFit);
  r.provenance["dataset"] = "x.csv";
  const auto text = report_to_json(r);
  const auto back = report_from_json(text);
  EXPECT_EQ(report_to_json(back), text);
  EXPECT_EQ(back.confusion, r.confusion);
  EXPECT_EQ(back.predictions, r.predictions);
  // wall time is not part of the artifact
  r.wall_seconds = 123.0;
  EXPECT_EQ(report_to_json(r), text);
}

TEST(Output, UnwritablePath) {
  try {
    write_text("/nonexistent_dir_honeyclf/x/out.md", "x");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnwritablePath);
  }
}
