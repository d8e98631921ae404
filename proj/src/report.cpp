#include "honeyclf/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "honeyclf/config.hpp"
#include "honeyclf/error.hpp"
#include "json.hpp"

namespace honeyclf {
namespace {

using nlohmann::json;

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> read_optional(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

std::string row(const std::vector<std::string>& cells, TableFormat format) {
  if (format == TableFormat::Delimited) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "\t" : "") + cells[i];
    return out + "\n";
  }
  std::string out = "|";
  for (const auto& c : cells) out += " " + c + " |";
  return out + "\n";
}

std::string separator(std::size_t columns) {
  std::string out = "|";
  for (std::size_t i = 0; i < columns; ++i) out += i == 0 ? "---|" : "---:|";
  return out + "\n";
}

const char* kBarNames[] = {"Accuracy", "Precision", "Recall", "F-Measure"};
const char* kBarColors[] = {"#4e79a7", "#f28e2b", "#59a14f", "#e15759"};

}  // namespace

std::string_view to_string(TableFormat f) {
  switch (f) {
    case TableFormat::Markdown: return "markdown";
    case TableFormat::Delimited: return "delimited";
    case TableFormat::Structured: return "structured";
  }
  return "?";
}

std::string_view file_extension(TableFormat f) {
  switch (f) {
    case TableFormat::Markdown: return "md";
    case TableFormat::Delimited: return "tsv";
    case TableFormat::Structured: return "json";
  }
  return "txt";
}

TableFormat parse_table_format(std::string_view s) {
  auto v = to_lower(s);
  if (v == "markdown" || v == "md") return TableFormat::Markdown;
  if (v == "delimited" || v == "tsv") return TableFormat::Delimited;
  if (v == "structured" || v == "structured-text" || v == "json") return TableFormat::Structured;
  throw Error(ErrorKind::Config, fmt::format("unknown format '{}' (markdown|delimited|structured)", s));
}

std::string format_fixed(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  // relative nudge so values like 0.9935 (stored as 0.99349999...) still round up
  const double scaled = value * scale;
  const double rounded = std::floor(scaled + 0.5 + 1e-9 * std::max(1.0, std::abs(scaled)));
  return fmt::format("{:.{}f}", rounded / scale, decimals);
}

std::string format_metric(const std::optional<double>& value, int decimals) {
  return value ? format_fixed(*value, decimals) : "?";
}

std::string report_label(const EvaluationReport& report) {
  auto it = report.provenance.find("label");
  return it != report.provenance.end() ? it->second : report.spec.name();
}

std::vector<const EvaluationReport*> comparison_order(const std::vector<EvaluationReport>& reports) {
  std::vector<const EvaluationReport*> ok;
  for (const auto& r : reports) {
    if (!r.error) ok.push_back(&r);
  }
  std::stable_sort(ok.begin(), ok.end(), [](const EvaluationReport* a, const EvaluationReport* b) {
    if (a->aggregate.accuracy != b->aggregate.accuracy) return a->aggregate.accuracy > b->aggregate.accuracy;
    return report_label(*a) < report_label(*b);
  });
  return ok;
}

std::string render_comparison(const std::vector<EvaluationReport>& reports, TableFormat format) {
  if (reports.empty()) throw Error(ErrorKind::InvalidArgument, "no reports to tabulate");
  const auto ordered = comparison_order(reports);
  if (format == TableFormat::Structured) {
    json rows = json::array();
    for (const auto* r : ordered) {
      rows.push_back({{"model", report_label(*r)},
                      {"accuracy", format_fixed(r->aggregate.accuracy, 2)},
                      {"precision", format_metric(r->aggregate.precision)},
                      {"recall", format_fixed(r->aggregate.recall, 3)},
                      {"f_measure", format_metric(r->aggregate.f_measure)}});
    }
    for (const auto& r : reports) {
      if (r.error) rows.push_back({{"model", report_label(r)}, {"error", *r.error}});
    }
    return rows.dump(2) + "\n";
  }
  const std::vector<std::string> header = {"ML Model", "Accuracy", "Precision", "Recall", "F-Measure"};
  std::string out = row(header, format);
  if (format == TableFormat::Markdown) out += separator(header.size());
  for (const auto* r : ordered) {
    out += row({report_label(*r), format_fixed(r->aggregate.accuracy, 2), format_metric(r->aggregate.precision),
                format_fixed(r->aggregate.recall, 3), format_metric(r->aggregate.f_measure)},
               format);
  }
  for (const auto& r : reports) {
    if (r.error) out += row({report_label(r), "ERROR", "-", "-", "-"}, format);
  }
  if (format == TableFormat::Markdown) {
    for (const auto& r : reports) {
      if (r.error) out += fmt::format("\n{}: {}\n", report_label(r), *r.error);
    }
  }
  return out;
}

std::string render_per_class(const EvaluationReport& report, TableFormat format) {
  if (report.error) throw Error(ErrorKind::InvalidArgument, "report has no metrics (model failed)");
  if (format == TableFormat::Structured) {
    json rows = json::array();
    for (const auto& m : report.per_class) {
      rows.push_back({{"class", m.name},
                      {"tp_rate", format_fixed(m.tp_rate, 3)},
                      {"fp_rate", format_fixed(m.fp_rate, 3)},
                      {"precision", format_metric(m.precision)},
                      {"recall", format_fixed(m.recall, 3)},
                      {"f_measure", format_metric(m.f_measure)},
                      {"support", m.support}});
    }
    return rows.dump(2) + "\n";
  }
  const std::vector<std::string> header = {"Class", "TP Rate", "FP Rate", "Precision", "Recall", "F-Measure"};
  std::string out = row(header, format);
  if (format == TableFormat::Markdown) out += separator(header.size());
  for (const auto& m : report.per_class) {
    out += row({m.name, format_fixed(m.tp_rate, 3), format_fixed(m.fp_rate, 3), format_metric(m.precision),
                format_fixed(m.recall, 3), format_metric(m.f_measure)},
               format);
  }
  return out;
}

std::string render_chart(const std::vector<EvaluationReport>& reports) {
  const auto ordered_all = comparison_order(reports);
  if (ordered_all.empty()) throw Error(ErrorKind::InvalidArgument, "no successful reports to chart");
  // keep input order for groups; the figure mirrors the table row order given
  std::vector<const EvaluationReport*> groups;
  for (const auto& r : reports) {
    if (!r.error) groups.push_back(&r);
  }

  constexpr double kBar = 14.0, kGap = 26.0, kLeft = 60.0, kTop = 40.0, kPlotH = 240.0;
  const double group_w = 4 * kBar + kGap;
  const double width = kLeft + group_w * static_cast<double>(groups.size()) + 150.0;
  const double height = kTop + kPlotH + 70.0;
  bool any_undefined = false;

  std::ostringstream svg;
  svg << fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" viewBox=\"0 0 {:.0f} {:.0f}\" "
      "font-family=\"sans-serif\" font-size=\"11\">\n",
      width, height, width, height);
  svg << fmt::format("<rect width=\"{:.0f}\" height=\"{:.0f}\" fill=\"white\"/>\n", width, height);
  for (int tick = 0; tick <= 100; tick += 20) {
    const double y = kTop + kPlotH * (1.0 - tick / 100.0);
    svg << fmt::format("<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"#dddddd\"/>\n", kLeft, y,
                       kLeft + group_w * static_cast<double>(groups.size()), y);
    svg << fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\">{}</text>\n", kLeft - 6, y + 4, tick);
  }
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto& agg = groups[g]->aggregate;
    const std::optional<double> values[] = {agg.accuracy, agg.precision ? std::optional(*agg.precision * 100) : std::nullopt,
                                            agg.recall * 100, agg.f_measure ? std::optional(*agg.f_measure * 100) : std::nullopt};
    const double x0 = kLeft + kGap / 2 + group_w * static_cast<double>(g);
    for (int b = 0; b < 4; ++b) {
      if (!values[b]) {
        any_undefined = true;
        continue;
      }
      const double v = std::clamp(*values[b], 0.0, 100.0);
      const double h = kPlotH * v / 100.0;
      svg << fmt::format(
          "<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"{}\"><title>{} {}: {}</title></rect>\n",
          x0 + b * kBar, kTop + kPlotH - h, kBar - 1, h, kBarColors[b], report_label(*groups[g]), kBarNames[b],
          format_fixed(*values[b], 2));
    }
    svg << fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n", x0 + 2 * kBar,
                       kTop + kPlotH + 16, report_label(*groups[g]));
  }
  const double lx = kLeft + group_w * static_cast<double>(groups.size()) + 16;
  for (int b = 0; b < 4; ++b) {
    const double ly = kTop + 18.0 * b;
    svg << fmt::format("<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"10\" height=\"10\" fill=\"{}\"/>\n", lx, ly, kBarColors[b]);
    svg << fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\">{}</text>\n", lx + 14, ly + 9, kBarNames[b]);
  }
  if (any_undefined) {
    svg << fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\">? omitted: undefined metric</text>\n", lx, kTop + 18.0 * 4 + 9);
  }
  svg << fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">metric value (%)</text>\n",
                     kLeft + group_w * static_cast<double>(groups.size()) / 2, kTop + kPlotH + 40);
  svg << "</svg>\n";
  return svg.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::UnwritablePath, fmt::format("cannot write '{}'", path.string()));
  out << text;
  if (!out) throw Error(ErrorKind::UnwritablePath, fmt::format("failed writing '{}'", path.string()));
}

void emit_table(const std::vector<EvaluationReport>& reports, TableFormat format, const std::filesystem::path& path) {
  write_text(path, render_comparison(reports, format));
}

void emit_chart(const std::vector<EvaluationReport>& reports, const std::filesystem::path& path) {
  write_text(path, render_chart(reports));
}

std::string report_to_json(const EvaluationReport& r) {
  json j;
  j["format"] = "honeyclf-report/1";
  j["model"] = r.spec.name();
  j["spec"] = json::parse(r.spec.to_json());
  j["hyperparameters"] = r.spec.hyperparameters();
  j["preprocess"] = to_string(r.mode);
  j["averaging"] = to_string(r.averaging);
  j["provenance"] = r.provenance;
  j["cv"] = {{"k", r.folds.k}, {"seed", r.folds.seed}, {"fold", r.folds.fold}, {"warnings", r.folds.warnings}};
  if (r.error) {
    j["error"] = *r.error;
    return j.dump(1) + "\n";
  }
  json counts = json::array();
  for (Eigen::Index i = 0; i < r.confusion.counts().rows(); ++i) {
    std::vector<long> rowv(r.confusion.counts().row(i).begin(), r.confusion.counts().row(i).end());
    counts.push_back(rowv);
  }
  j["classes"] = r.confusion.classes();
  j["confusion"] = counts;
  json per_class = json::array();
  for (const auto& m : r.per_class) {
    per_class.push_back({{"class", m.name},
                         {"tp_rate", m.tp_rate},
                         {"fp_rate", m.fp_rate},
                         {"precision", optional_number(m.precision)},
                         {"recall", m.recall},
                         {"f_measure", optional_number(m.f_measure)},
                         {"support", m.support}});
  }
  j["per_class"] = per_class;
  j["aggregate"] = {{"accuracy", r.aggregate.accuracy},
                    {"precision", optional_number(r.aggregate.precision)},
                    {"recall", r.aggregate.recall},
                    {"f_measure", optional_number(r.aggregate.f_measure)}};
  j["predictions"] = r.predictions;
  j["row_ids"] = r.row_ids;
  return j.dump(1) + "\n";
}

EvaluationReport report_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    if (j.value("format", "") != "honeyclf-report/1") throw Error(ErrorKind::Io, "not a report file");
    EvaluationReport r;
    r.spec = ModelSpec::from_json(j.at("spec").dump());
    r.mode = parse_preprocess_mode(j.at("preprocess").get<std::string>());
    r.averaging = j.at("averaging").get<std::string>() == "macro" ? Averaging::Macro : Averaging::Weighted;
    r.provenance = j.at("provenance").get<std::map<std::string, std::string>>();
    const auto& cv = j.at("cv");
    r.folds.k = cv.at("k").get<int>();
    r.folds.seed = cv.at("seed").get<std::uint64_t>();
    r.folds.fold = cv.at("fold").get<std::vector<int>>();
    r.folds.warnings = cv.at("warnings").get<std::vector<std::string>>();
    if (j.contains("error")) {
      r.error = j.at("error").get<std::string>();
      return r;
    }
    const auto classes = j.at("classes").get<std::vector<std::string>>();
    const auto k = static_cast<Eigen::Index>(classes.size());
    ConfusionMatrix::Counts counts(k, k);
    for (Eigen::Index a = 0; a < k; ++a) {
      for (Eigen::Index b = 0; b < k; ++b) counts(a, b) = j.at("confusion").at(static_cast<std::size_t>(a)).at(static_cast<std::size_t>(b)).get<long>();
    }
    r.confusion = ConfusionMatrix(classes, counts);
    for (const auto& m : j.at("per_class")) {
      r.per_class.push_back(ClassMetric{m.at("class").get<std::string>(), m.at("tp_rate").get<double>(),
                                        m.at("fp_rate").get<double>(), read_optional(m.at("precision")),
                                        m.at("recall").get<double>(), read_optional(m.at("f_measure")),
                                        m.at("support").get<long>()});
    }
    const auto& a = j.at("aggregate");
    r.aggregate = AggregateMetrics{a.at("accuracy").get<double>(), read_optional(a.at("precision")),
                                   a.at("recall").get<double>(), read_optional(a.at("f_measure"))};
    r.predictions = j.at("predictions").get<std::vector<int>>();
    r.row_ids = j.at("row_ids").get<std::vector<std::string>>();
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Io, fmt::format("malformed report: {}", e.what()));
  }
}

EvaluationReport load_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, fmt::format("cannot open report '{}'", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return report_from_json(ss.str());
}

}  // namespace honeyclf
