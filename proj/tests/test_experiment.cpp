#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>
#include <sys/wait.h>

#include <fmt/format.h>

#include "honeyclf/error.hpp"
#include "honeyclf/experiment.hpp"
#include "honeyclf/report.hpp"
#include "test_util.hpp"

using namespace honeyclf;
using honeyclf::testing::TempDir;
using honeyclf::testing::read_file;

namespace {

int run_cli(const std::string& args, const std::filesystem::path& log) {
  const std::string cmd = std::string("\"") + HONEYCLF_CLI + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

ExperimentConfig quick_config(const std::filesystem::path& out) {
  std::istringstream in("models = LDA, DT, RF\nforest.trees = 15\nfolds = 5\n");
  auto cfg = ExperimentConfig::from_config(KeyValueConfig::parse(in));
  cfg.dataset = honeyclf::testing::fixture_path();
  cfg.out = out;
  return cfg;
}

}  // namespace

TEST(Experiment, ConfigRejectsUnknownKeys) {
  std::istringstream in("modles = RF\n");
  EXPECT_THROW(ExperimentConfig::from_config(KeyValueConfig::parse(in)), Error);
}

TEST(Experiment, MissingDatasetIsConfigError) {
  ExperimentConfig cfg;
  cfg.dataset = "/nonexistent/honey.csv";
  try {
    cfg.validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Config);
  }
}

TEST(Experiment, ShippedExampleConfigParses) {
  const auto cfg = ExperimentConfig::from_config(
      KeyValueConfig::load(std::filesystem::path(HONEYCLF_CONFIG_DIR) / "botanical_original.conf"));
  EXPECT_EQ(cfg.folds, 10);
  EXPECT_EQ(cfg.models.size(), 6u);
}

TEST(Experiment, DigestIsSha256) {
  TempDir dir("digest");
  honeyclf::testing::write_file(dir.path() / "abc.txt", "abc");
  EXPECT_EQ(file_digest(dir.path() / "abc.txt"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Experiment, RunWritesArtifactsAndIsRepeatable) {
  TempDir a("run_a"), b("run_b");
  const auto ra = run_experiment(quick_config(a.path()));
  const auto rb = run_experiment(quick_config(b.path()));
  EXPECT_EQ(ra.exit_code, 0);
  ASSERT_EQ(ra.files.size(), rb.files.size());
  for (const char* name : {"comparison.md", "comparison.tsv", "comparison.json", "chart.svg", "RF.report.json",
                           "LDA.per_class.md", "experiment.conf"}) {
    ASSERT_TRUE(std::filesystem::exists(a.path() / name)) << name;
    EXPECT_EQ(read_file(a.path() / name).find(a.path().string()), std::string::npos) << name;
  }
  for (const auto& f : ra.files) {
    const auto rel = std::filesystem::relative(f, a.path());
    EXPECT_EQ(read_file(f), read_file(b.path() / rel)) << rel;
  }
  const auto report = load_report(a.path() / "RF.report.json");
  EXPECT_EQ(report.provenance.at("rows"), "429");
  EXPECT_EQ(report.provenance.at("dataset_sha256").size(), 64u);
  EXPECT_GT(report.aggregate.accuracy, 80.0);
}

TEST(Experiment, FailingModelIsReportedNotFatal) {
  // QDA cannot fit a class with a single training sample
  Eigen::MatrixXd x(12, 2);
  for (int i = 0; i < 12; ++i) x.row(i) << i, (i * 7) % 5;
  const auto t = TaskTable::from_names(x, {"A", "A", "A", "A", "A", "B", "B", "B", "B", "B", "C", "C"});
  ModelSpec qda, dt;
  qda.algorithm = Algorithm::QDA;
  dt.algorithm = Algorithm::DecisionTree;
  const auto reports = evaluate_models(t, {qda, dt}, 2, 1, PreprocessMode::GlobalFit);
  ASSERT_EQ(reports.size(), 2u);
  ASSERT_TRUE(reports[0].error);
  EXPECT_NE(reports[0].error->find("fold"), std::string::npos);
  EXPECT_FALSE(reports[1].error) << *reports[1].error;
}

TEST(Cli, IngestSummarizesFixture) {
  TempDir dir("cli_ingest");
  const auto log = dir.path() / "log.txt";
  EXPECT_EQ(run_cli("ingest --dataset \"" + honeyclf::testing::fixture_path().string() + "\"", log), 0);
  const auto text = read_file(log);
  EXPECT_NE(text.find("429"), std::string::npos) << text;
  EXPECT_NE(text.find("Jiangxi"), std::string::npos) << text;
}

TEST(Cli, RunCompareAndChart) {
  TempDir dir("cli_run");
  const auto log = dir.path() / "log.txt";
  const auto out = dir.path() / "res";
  ASSERT_EQ(run_cli("run --dataset \"" + honeyclf::testing::fixture_path().string() +
                        "\" --subset pure --task geographical --models LDA,DT --folds 5 --out \"" + out.string() + "\"",
                    log),
            0)
      << read_file(log);
  EXPECT_NE(read_file(log).find("| ML Model | Accuracy"), std::string::npos);
  const auto merged = dir.path() / "merged.tsv";
  EXPECT_EQ(run_cli("compare \"" + (out / "LDA.report.json").string() + "\" \"" + (out / "DT.report.json").string() +
                        "\" --format tsv --out \"" + merged.string() + "\"",
                    log),
            0);
  EXPECT_EQ(read_file(merged).rfind("ML Model\tAccuracy", 0), 0u);
  EXPECT_EQ(run_cli("chart \"" + (out / "DT.report.json").string() + "\" --out \"" + (dir.path() / "c.svg").string() + "\"",
                    log),
            0);
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "c.svg"));
}

TEST(Cli, ConfigErrorsExitOne) {
  TempDir dir("cli_err");
  const auto log = dir.path() / "log.txt";
  EXPECT_EQ(run_cli("run --dataset /nonexistent.csv", log), 1);
  EXPECT_NE(read_file(log).find("error"), std::string::npos);
  EXPECT_EQ(run_cli("run --dataset \"" + honeyclf::testing::fixture_path().string() + "\" --models KNN", log), 1);
  EXPECT_EQ(run_cli("run --dataset \"" + honeyclf::testing::fixture_path().string() + "\" --task geographical --out \"" +
                        (dir.path() / "o").string() + "\"",
                    log),
            1);
}

TEST(Cli, ModelFailureExitsTwo) {
  // three rows of one botanical class make QDA fail inside some folds
  TempDir dir("cli_fail");
  std::string csv = "Sample type,Botanical origin,Region,Level,Al,B,Ba,Ca,Fe,K,Mg,Mn,Na,P,Sr,Zn\n";
  for (int i = 0; i < 12; ++i) {
    csv += fmt::format("Pure honey,{},Jilin,,{},{},1,1,1,1,1,1,1,1,1,1\n", i < 10 ? "Acacia" : "Rape", i, (i * 3) % 7);
  }
  honeyclf::testing::write_file(dir.path() / "d.csv", csv);
  const auto log = dir.path() / "log.txt";
  EXPECT_EQ(run_cli("run --dataset \"" + (dir.path() / "d.csv").string() + "\" --models QDA,DT --folds 2 --out \"" +
                        (dir.path() / "o").string() + "\"",
                    log),
            2)
      << read_file(log);
  EXPECT_NE(read_file(dir.path() / "o" / "comparison.md").find("ERROR"), std::string::npos);
}
