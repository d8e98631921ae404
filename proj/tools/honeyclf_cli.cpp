// Command-line front end: ingest, run, compare, chart.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "honeyclf/error.hpp"
#include "honeyclf/experiment.hpp"
#include "honeyclf/ingest.hpp"
#include "honeyclf/report.hpp"

namespace fs = std::filesystem;
using namespace honeyclf;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;

void print_percentages(const std::string& title, const std::map<std::string, std::size_t>& counts) {
  std::size_t total = 0;
  for (const auto& [name, n] : counts) total += n;
  std::cout << title << " (" << total << " samples)\n";
  for (const auto& [name, n] : counts) {
    std::cout << fmt::format("  {:<16} {:>4}  {:>6}%\n", name, n,
                             format_fixed(100.0 * static_cast<double>(n) / static_cast<double>(total), 2));
  }
}

int cmd_ingest(const fs::path& dataset, const std::string& mapping_path) {
  const auto mapping = mapping_path.empty() ? ColumnMapping{} : ColumnMapping::load(mapping_path);
  const auto ds = parse_dataset(dataset, mapping);
  const auto summary = summarize(ds);
  std::cout << fmt::format("dataset  {}\nsha256   {}\nrows     {}\n", dataset.string(), file_digest(dataset), ds.size());
  for (SampleType t : {SampleType::PureHoney, SampleType::AdulteratedHoney, SampleType::Syrup}) {
    auto it = summary.type_counts.find(t);
    std::cout << fmt::format("  {:<17} {}\n", to_string(t), it == summary.type_counts.end() ? 0 : it->second);
  }
  std::cout << fmt::format("not-detected cells: {}\n\n", summary.missing_cells);
  print_percentages("Floral sources of honey samples", summary.botanical_counts);
  std::cout << '\n';
  print_percentages("Geographical origins of honey samples", summary.region_counts);
  return kExitOk;
}

std::vector<EvaluationReport> load_reports(const std::vector<std::string>& files) {
  std::vector<EvaluationReport> reports;
  for (const auto& f : files) {
    auto r = load_report(f);
    if (!r.provenance.count("label")) {
      const auto subset = r.provenance.count("subset") ? r.provenance.at("subset") : "";
      const auto task = r.provenance.count("task") ? r.provenance.at("task") : "";
      const bool mixed = files.size() > 1 && !subset.empty();
      if (mixed) r.provenance["label"] = fmt::format("{} ({}/{})", r.spec.name(), subset, task);
    }
    reports.push_back(std::move(r));
  }
  return reports;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mineral-profile origin classification: cross-validated model comparison"};
  app.require_subcommand(1);

  std::string dataset, mapping, config_path, subset, task, models, preprocess, out, formats, features, averaging;
  std::optional<int> folds;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> report_files;
  std::string format = "markdown";

  auto* ingest = app.add_subcommand("ingest", "Validate a dataset and print class percentages");
  ingest->add_option("--dataset", dataset, "Delimited source file")->required();
  ingest->add_option("--mapping", mapping, "Column mapping config");

  auto* run = app.add_subcommand("run", "Cross-validate models and write reports");
  run->add_option("--config", config_path, "Experiment config (flags override its values)");
  run->add_option("--dataset", dataset, "Delimited source file");
  run->add_option("--mapping", mapping, "Column mapping config");
  run->add_option("--subset", subset, "original|pure|adulterated");
  run->add_option("--task", task, "botanical|geographical");
  run->add_option("--models", models, "Comma list of SVM,LDA,QDA,LR,DT,RF or 'all'");
  run->add_option("--features", features, "Comma list of element symbols (default all 12)");
  run->add_option("--folds", folds, "Cross-validation folds (default 10)");
  run->add_option("--seed", seed, "Seed for folds and seeded models (default 42)");
  run->add_option("--preprocess", preprocess, "global|per-fold");
  run->add_option("--averaging", averaging, "weighted|macro");
  run->add_option("--out", out, "Output directory");
  run->add_option("--format", formats, "Comma list of markdown,delimited,structured");

  auto* compare = app.add_subcommand("compare", "Merge report files into one comparison table");
  compare->add_option("reports", report_files, "Report JSON files")->required();
  compare->add_option("--format", format, "markdown|delimited|structured");
  compare->add_option("--out", out, "Output file (default stdout)");

  auto* chart = app.add_subcommand("chart", "Render a grouped bar chart from report files");
  chart->add_option("reports", report_files, "Report JSON files")->required();
  chart->add_option("--out", out, "SVG output file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (ingest->parsed()) return cmd_ingest(dataset, mapping);

    if (run->parsed()) {
      KeyValueConfig cfg = config_path.empty() ? KeyValueConfig{} : KeyValueConfig::load(config_path);
      auto set = [&](const char* key, const std::string& v) {
        if (!v.empty()) cfg.set(key, v);
      };
      set("dataset", dataset);
      set("mapping", mapping);
      set("subset", subset);
      set("task", task);
      set("models", models);
      set("features", features);
      set("preprocess", preprocess);
      set("averaging", averaging);
      set("out", out);
      set("formats", formats);
      if (folds) cfg.set("folds", std::to_string(*folds));
      if (seed) cfg.set("seed", std::to_string(*seed));
      const auto config = ExperimentConfig::from_config(cfg);
      const auto result = run_experiment(config);
      std::cout << render_comparison(result.reports, TableFormat::Markdown);
      for (const auto& r : result.reports) {
        for (const auto& w : r.folds.warnings) std::cerr << "warning: " << r.spec.name() << ": " << w << '\n';
        std::cerr << fmt::format("{}: {:.2f} s\n", r.spec.name(), r.wall_seconds);
      }
      std::cerr << fmt::format("wrote {} files to {}\n", result.files.size(), config.out.string());
      return result.exit_code;
    }

    if (compare->parsed()) {
      const auto reports = load_reports(report_files);
      const auto fmt_kind = parse_table_format(format);
      if (out.empty()) {
        std::cout << render_comparison(reports, fmt_kind);
      } else {
        emit_table(reports, fmt_kind, out);
      }
      return kExitOk;
    }

    if (chart->parsed()) {
      emit_chart(load_reports(report_files), out);
      return kExitOk;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}
