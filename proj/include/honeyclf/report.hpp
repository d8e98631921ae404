#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "honeyclf/evaluation.hpp"

namespace honeyclf {

enum class TableFormat { Markdown, Delimited, Structured };

std::string_view to_string(TableFormat f);
std::string_view file_extension(TableFormat f);
TableFormat parse_table_format(std::string_view s);

/// Half-up rounding to `decimals` places, rendered with exactly that many digits.
std::string format_fixed(double value, int decimals);
/// "?" for undefined values.
std::string format_metric(const std::optional<double>& value, int decimals = 3);

/// Row label: provenance "label" when present, otherwise the model short name.
std::string report_label(const EvaluationReport& report);

/// Successful reports ordered by accuracy (descending), then label.
std::vector<const EvaluationReport*> comparison_order(const std::vector<EvaluationReport>& reports);

/// Model | Accuracy | Precision | Recall | F-Measure; failed models listed last.
std::string render_comparison(const std::vector<EvaluationReport>& reports, TableFormat format);
/// Class | TP Rate | FP Rate | Precision | Recall | F-Measure
std::string render_per_class(const EvaluationReport& report, TableFormat format);

/// Grouped bar chart (one group per model, four bars in percent) as SVG text.
std::string render_chart(const std::vector<EvaluationReport>& reports);

/// Writes text to `path`, throwing UnwritablePath on failure.
void write_text(const std::filesystem::path& path, std::string_view text);

void emit_table(const std::vector<EvaluationReport>& reports, TableFormat format, const std::filesystem::path& path);
void emit_chart(const std::vector<EvaluationReport>& reports, const std::filesystem::path& path);

/// Machine-readable report (JSON). Wall time is left out so output is reproducible.
std::string report_to_json(const EvaluationReport& report);
EvaluationReport report_from_json(std::string_view text);
EvaluationReport load_report(const std::filesystem::path& path);

}  // namespace honeyclf
