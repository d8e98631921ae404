#include "honeyclf/experiment.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <memory>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <openssl/evp.h>

#include "honeyclf/error.hpp"

namespace honeyclf {
namespace {

template <typename T>
T parse_int(const std::string& key, const std::string& text) {
  T v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorKind::Config, fmt::format("'{}' expects an integer, got '{}'", key, text));
  }
  return v;
}

}  // namespace

std::vector<std::string> ExperimentConfig::known_keys() {
  std::vector<std::string> keys = {"dataset", "mapping", "subset",    "task",    "features", "models", "folds",
                                   "seed",    "preprocess", "averaging", "out", "formats",  "chart"};
  for (auto& k : ModelSpec::override_keys()) keys.push_back(k);
  return keys;
}

ExperimentConfig ExperimentConfig::from_config(const KeyValueConfig& cfg) {
  if (auto unknown = cfg.unknown_keys(known_keys()); !unknown.empty()) {
    throw Error(ErrorKind::Config, fmt::format("unknown experiment key '{}'", unknown.front()));
  }
  ExperimentConfig c;
  c.dataset = cfg.get_or("dataset", "");
  c.mapping = cfg.get_or("mapping", "");
  if (auto v = cfg.get("subset")) c.subset = parse_subset(*v);
  if (auto v = cfg.get("task")) c.task = parse_task_kind(*v);
  if (auto v = cfg.get("features"); v && to_lower(*v) != "all" && !v->empty()) {
    std::vector<Element> f;
    for (const auto& sym : split_list(*v)) {
      auto e = element_from_symbol(sym);
      if (!e) throw Error(ErrorKind::Config, fmt::format("unknown element '{}' in features", sym));
      f.push_back(*e);
    }
    c.features = f;
  }
  if (auto v = cfg.get("folds")) c.folds = parse_int<int>("folds", *v);
  if (auto v = cfg.get("seed")) c.seed = parse_int<std::uint64_t>("seed", *v);
  if (auto v = cfg.get("preprocess")) c.mode = parse_preprocess_mode(*v);
  if (auto v = cfg.get("averaging")) {
    auto a = to_lower(*v);
    if (a == "weighted") c.averaging = Averaging::Weighted;
    else if (a == "macro") c.averaging = Averaging::Macro;
    else throw Error(ErrorKind::Config, fmt::format("unknown averaging '{}' (weighted|macro)", *v));
  }
  if (auto v = cfg.get("out")) c.out = *v;
  if (auto v = cfg.get("formats")) {
    c.formats.clear();
    for (const auto& f : split_list(*v)) c.formats.push_back(parse_table_format(f));
  }
  if (auto v = cfg.get("chart")) c.chart = to_lower(*v) != "false" && *v != "0" && to_lower(*v) != "no";
  for (Algorithm a : parse_algorithms(cfg.get_or("models", "all"))) {
    ModelSpec spec;
    spec.algorithm = a;
    spec.seed = c.seed;
    spec.apply_overrides(cfg);
    c.models.push_back(spec);
  }
  return c;
}

void ExperimentConfig::validate() const {
  if (dataset.empty()) throw Error(ErrorKind::Config, "no dataset given");
  if (!std::filesystem::is_regular_file(dataset)) {
    throw Error(ErrorKind::Config, fmt::format("dataset '{}' does not exist", dataset.string()));
  }
  if (!mapping.empty() && !std::filesystem::is_regular_file(mapping)) {
    throw Error(ErrorKind::Config, fmt::format("mapping '{}' does not exist", mapping.string()));
  }
  if (folds < 2) throw Error(ErrorKind::Config, fmt::format("folds must be >= 2, got {}", folds));
  if (models.empty()) throw Error(ErrorKind::Config, "at least one model is required");
  if (formats.empty() && !chart) throw Error(ErrorKind::Config, "no output formats selected");
  for (const auto& m : models) {
    try {
      m.validate();
    } catch (const Error& e) {
      throw Error(ErrorKind::Config, e.detail());
    }
  }
}

std::string ExperimentConfig::describe() const {
  std::string models_list;
  for (const auto& m : models) models_list += (models_list.empty() ? "" : ",") + m.name();
  std::string feature_list = "all";
  if (features) {
    feature_list.clear();
    for (auto e : *features) feature_list += (feature_list.empty() ? "" : ",") + std::string(element_symbol(e));
  }
  std::string fmts;
  for (auto f : formats) fmts += (fmts.empty() ? "" : ",") + std::string(to_string(f));
  return fmt::format(
      "dataset = {}\nmapping = {}\nsubset = {}\ntask = {}\nfeatures = {}\nmodels = {}\nfolds = {}\nseed = {}\n"
      "preprocess = {}\naveraging = {}\nformats = {}\nchart = {}\n",
      dataset.string(), mapping.empty() ? "" : mapping.string(), to_string(subset), to_string(task), feature_list,
      models_list, folds, seed, to_string(mode), to_string(averaging), fmts, chart ? "true" : "false");
}

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, fmt::format("cannot open '{}'", path.string()));
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw Error(ErrorKind::Io, "sha256 init failed");
  char buf[1 << 14];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  std::string hex;
  for (unsigned i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
  return hex;
}

std::vector<EvaluationReport> evaluate_models(const TaskTable& table, const std::vector<ModelSpec>& models, int folds,
                                              std::uint64_t seed, PreprocessMode mode, Averaging averaging) {
  std::vector<EvaluationReport> reports;
  for (const auto& spec : models) {
    try {
      reports.push_back(cross_validate(table, spec, folds, seed, mode, averaging));
    } catch (const Error& e) {
      EvaluationReport failed;
      failed.spec = spec;
      failed.mode = mode;
      failed.averaging = averaging;
      failed.folds.k = folds;
      failed.folds.seed = seed;
      failed.error = e.what();
      reports.push_back(std::move(failed));
    }
  }
  return reports;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto mapping = config.mapping.empty() ? ColumnMapping{} : ColumnMapping::load(config.mapping);
  const auto dataset = filter_subset(parse_dataset(config.dataset, mapping), config.subset);
  const auto table = build_task(dataset, config.task, config.features);
  const auto digest = file_digest(config.dataset);

  ExperimentResult result;
  result.reports = evaluate_models(table, config.models, config.folds, config.seed, config.mode, config.averaging);
  for (auto& r : result.reports) {
    r.provenance["dataset"] = config.dataset.filename().string();
    r.provenance["dataset_sha256"] = digest;
    r.provenance["mapping"] = config.mapping.empty() ? "default" : config.mapping.filename().string();
    r.provenance["subset"] = std::string(to_string(config.subset));
    r.provenance["task"] = std::string(to_string(config.task));
    r.provenance["rows"] = std::to_string(table.rows());
    r.provenance["features"] = fmt::format("{}", fmt::join(table.feature_names(), ","));
    r.provenance["missing_cells"] = std::to_string(table.missing_count());
    if (r.error) result.exit_code = 2;
  }

  std::error_code ec;
  std::filesystem::create_directories(config.out, ec);
  if (ec) throw Error(ErrorKind::UnwritablePath, fmt::format("cannot create '{}': {}", config.out.string(), ec.message()));
  auto emit = [&](const std::string& name, std::string_view text) {
    const auto path = config.out / name;
    write_text(path, text);
    result.files.push_back(path);
  };
  emit("experiment.conf", config.describe());
  for (const auto& r : result.reports) {
    emit(fmt::format("{}.report.json", r.spec.name()), report_to_json(r));
    if (r.error) continue;
    for (auto f : config.formats) {
      emit(fmt::format("{}.per_class.{}", r.spec.name(), file_extension(f)), render_per_class(r, f));
    }
  }
  for (auto f : config.formats) emit(fmt::format("comparison.{}", file_extension(f)), render_comparison(result.reports, f));
  if (config.chart && !comparison_order(result.reports).empty()) emit("chart.svg", render_chart(result.reports));
  return result;
}

}  // namespace honeyclf
