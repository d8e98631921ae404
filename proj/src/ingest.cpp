#include "honeyclf/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_map>

#include <fmt/format.h>

#include "honeyclf/error.hpp"

namespace honeyclf {
namespace {

std::vector<std::string> split_record(const std::string& line, char delim) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delim) {
      cells.push_back(std::move(cell));
      cell.clear();
    } else {
      cell.push_back(c);
    }
  }
  cells.push_back(std::move(cell));
  for (auto& c : cells) c = trim(c);
  return cells;
}

std::string quote_cell(const std::string& s, char delim) {
  if (s.find(delim) == std::string::npos && s.find('"') == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::optional<std::string> label_cell(const std::string& cell, const ColumnMapping& m) {
  if (cell.empty() || cell == m.missing_token || cell == "NA") return std::nullopt;
  return cell;
}

}  // namespace

void ColumnMapping::validate() const {
  if (missing_token.empty()) throw Error(ErrorKind::Config, "missing_token must be nonempty");
  std::set<std::string> distinct(elements.begin(), elements.end());
  if (distinct.size() != elements.size()) {
    throw Error(ErrorKind::Config, "element columns must map to distinct source columns");
  }
  for (const auto& e : elements) {
    if (e.empty()) throw Error(ErrorKind::Config, "element column name is empty");
  }
}

ColumnMapping ColumnMapping::from_config(const KeyValueConfig& cfg) {
  ColumnMapping m;
  std::vector<std::string> known = {"id",         "sample_type",       "botanical",   "region",
                                    "level",      "missing_token",     "delimiter",   "type.pure",
                                    "type.adulterated", "type.syrup"};
  for (Element e : kElements) known.push_back(fmt::format("element.{}", element_symbol(e)));
  if (auto unknown = cfg.unknown_keys(known); !unknown.empty()) {
    throw Error(ErrorKind::Config, fmt::format("unknown mapping key '{}'", unknown.front()));
  }
  if (auto v = cfg.get("id"); v && !v->empty()) m.id = *v;
  m.sample_type = cfg.get_or("sample_type", m.sample_type);
  m.botanical = cfg.get_or("botanical", m.botanical);
  m.region = cfg.get_or("region", m.region);
  m.level = cfg.get_or("level", m.level);
  m.missing_token = cfg.get_or("missing_token", m.missing_token);
  m.pure_value = cfg.get_or("type.pure", m.pure_value);
  m.adulterated_value = cfg.get_or("type.adulterated", m.adulterated_value);
  m.syrup_value = cfg.get_or("type.syrup", m.syrup_value);
  if (auto d = cfg.get("delimiter")) {
    if (*d == "tab" || *d == "\\t") {
      m.delimiter = '\t';
    } else if (d->size() == 1) {
      m.delimiter = (*d)[0];
    } else {
      throw Error(ErrorKind::Config, fmt::format("delimiter must be one character or 'tab', got '{}'", *d));
    }
  }
  for (std::size_t i = 0; i < kElementCount; ++i) {
    m.elements[i] = cfg.get_or(fmt::format("element.{}", element_symbol(kElements[i])), m.elements[i]);
  }
  m.validate();
  return m;
}

ColumnMapping ColumnMapping::load(const std::filesystem::path& path) {
  return from_config(KeyValueConfig::load(path));
}

std::map<std::string, std::string> ColumnMapping::as_map() const {
  std::map<std::string, std::string> out{{"sample_type", sample_type},
                                         {"botanical", botanical},
                                         {"region", region},
                                         {"level", level},
                                         {"missing_token", missing_token},
                                         {"delimiter", delimiter == '\t' ? "tab" : std::string(1, delimiter)}};
  if (id) out["id"] = *id;
  for (std::size_t i = 0; i < kElementCount; ++i) {
    out[fmt::format("element.{}", element_symbol(kElements[i]))] = elements[i];
  }
  return out;
}

std::string_view to_string(SubsetFilter f) {
  switch (f) {
    case SubsetFilter::Original: return "original";
    case SubsetFilter::PureHoney: return "pure";
    case SubsetFilter::AdulteratedHoney: return "adulterated";
  }
  return "?";
}

SubsetFilter parse_subset(std::string_view s) {
  auto v = to_lower(s);
  if (v == "original") return SubsetFilter::Original;
  if (v == "pure") return SubsetFilter::PureHoney;
  if (v == "adulterated") return SubsetFilter::AdulteratedHoney;
  throw Error(ErrorKind::Config, fmt::format("unknown subset '{}' (original|pure|adulterated)", s));
}

TaskKind parse_task_kind(std::string_view s) {
  auto v = to_lower(s);
  if (v == "botanical") return TaskKind::Botanical;
  if (v == "geographical") return TaskKind::Geographical;
  throw Error(ErrorKind::Config, fmt::format("unknown task '{}' (botanical|geographical)", s));
}

Dataset parse_dataset(const std::filesystem::path& path, const ColumnMapping& mapping) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, fmt::format("cannot open dataset '{}'", path.string()));
  return parse_dataset(in, mapping, path.string());
}

Dataset parse_dataset(std::istream& in, const ColumnMapping& mapping, const std::string& source) {
  mapping.validate();
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::EmptyDataset, fmt::format("'{}' has no header", source));
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = split_record(line, mapping.delimiter);

  std::unordered_map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col.emplace(header[i], i);
  auto require = [&](const std::string& name) -> std::size_t {
    auto it = col.find(name);
    if (it == col.end()) {
      throw Error(ErrorKind::UnmappedColumn, fmt::format("'{}' header lacks column '{}'", source, name));
    }
    return it->second;
  };
  std::optional<std::size_t> id_col;
  if (mapping.id) id_col = require(*mapping.id);
  const auto type_col = require(mapping.sample_type);
  const auto bot_col = require(mapping.botanical);
  const auto reg_col = require(mapping.region);
  const auto lvl_col = require(mapping.level);
  std::array<std::size_t, kElementCount> el_col{};
  for (std::size_t i = 0; i < kElementCount; ++i) el_col[i] = require(mapping.elements[i]);

  const auto pure = to_lower(mapping.pure_value);
  const auto adult = to_lower(mapping.adulterated_value);
  const auto syrup = to_lower(mapping.syrup_value);

  std::vector<Sample> samples;
  std::size_t row = 0;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    ++row;
    auto cells = split_record(line, mapping.delimiter);
    if (cells.size() < header.size()) cells.resize(header.size());
    auto bad = [&](std::size_t c, const std::string& why) {
      return Error(ErrorKind::MalformedCell,
                   fmt::format("{}:{} column '{}': {}", source, lineno, header[c], why));
    };

    Sample s;
    s.id = id_col ? cells[*id_col] : std::to_string(row);
    auto type = to_lower(cells[type_col]);
    if (type == pure || type == "pure" || type == "purehoney") {
      s.sample_type = SampleType::PureHoney;
    } else if (type == adult || type == "adulterated" || type == "adulteratedhoney") {
      s.sample_type = SampleType::AdulteratedHoney;
    } else if (type == syrup) {
      s.sample_type = SampleType::Syrup;
    } else {
      throw bad(type_col, fmt::format("unrecognized sample type '{}'", cells[type_col]));
    }
    if (s.sample_type != SampleType::Syrup) {
      s.botanical = label_cell(cells[bot_col], mapping);
      s.region = label_cell(cells[reg_col], mapping);
      if (!s.botanical) throw bad(bot_col, "honey sample without botanical origin");
      if (s.sample_type == SampleType::PureHoney && !s.region) throw bad(reg_col, "pure honey sample without region");
    }
    s.level = label_cell(cells[lvl_col], mapping);

    std::array<MineralVector::Slot, kElementCount> values{};
    for (std::size_t i = 0; i < kElementCount; ++i) {
      const auto& cell = cells[el_col[i]];
      if (cell == mapping.missing_token) continue;
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v) || v < 0.0) {
        throw bad(el_col[i], fmt::format("expected a non-negative number or '{}', got '{}'",
                                         mapping.missing_token, cell));
      }
      values[i] = v;
    }
    s.minerals = MineralVector(values);
    samples.push_back(std::move(s));
  }
  if (samples.empty()) throw Error(ErrorKind::EmptyDataset, fmt::format("'{}' has no data rows", source));
  return Dataset(std::move(samples), Provenance{source, mapping.as_map(), {}});
}

Dataset filter_subset(const Dataset& ds, SubsetFilter filter) {
  if (ds.empty()) throw Error(ErrorKind::EmptyDataset, "cannot filter an empty dataset");
  std::vector<Sample> kept;
  for (const auto& s : ds.samples()) {
    bool keep = filter == SubsetFilter::Original ||
                (filter == SubsetFilter::PureHoney && s.sample_type == SampleType::PureHoney) ||
                (filter == SubsetFilter::AdulteratedHoney && s.sample_type == SampleType::AdulteratedHoney);
    if (keep) kept.push_back(s);
  }
  if (kept.empty()) {
    throw Error(ErrorKind::EmptyDataset, fmt::format("subset '{}' removed every row", to_string(filter)));
  }
  auto prov = ds.provenance();
  prov.filters.emplace_back(to_string(filter));
  return Dataset(std::move(kept), std::move(prov));
}

TaskTable build_task(const Dataset& ds, TaskKind kind, const std::optional<std::vector<Element>>& feature_filter) {
  if (ds.empty()) throw Error(ErrorKind::EmptyDataset, "cannot build a task from an empty dataset");
  std::vector<std::size_t> cols;
  for (std::size_t i = 0; i < kElementCount; ++i) {
    if (!feature_filter || std::find(feature_filter->begin(), feature_filter->end(), kElements[i]) !=
                               feature_filter->end()) {
      cols.push_back(i);
    }
  }
  if (cols.empty()) throw Error(ErrorKind::InvalidArgument, "feature filter selects no elements");

  const auto n = static_cast<Eigen::Index>(ds.size());
  Eigen::MatrixXd x(n, static_cast<Eigen::Index>(cols.size()));
  std::vector<std::string> names;
  std::vector<std::string> ids;
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& s = ds.samples()[static_cast<std::size_t>(r)];
    std::optional<std::string> label;
    if (kind == TaskKind::Botanical) {
      label = s.sample_type == SampleType::Syrup ? std::optional<std::string>("Syrup") : s.botanical;
    } else {
      label = s.region;
    }
    if (!label) {
      throw Error(ErrorKind::MissingLabel,
                  fmt::format("sample '{}' ({}) has no {} label", s.id, to_string(s.sample_type), to_string(kind)));
    }
    names.push_back(*label);
    ids.push_back(s.id);
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const auto& slot = s.minerals[cols[c]];
      x(r, static_cast<Eigen::Index>(c)) = slot ? *slot : TaskTable::missing();
    }
  }
  auto classes = canonical_classes(names);
  if (classes.size() < 2) {
    throw Error(ErrorKind::SingleClass, fmt::format("{} task has a single class '{}'", to_string(kind), classes.front()));
  }
  std::vector<int> labels;
  for (const auto& name : names) {
    labels.push_back(static_cast<int>(std::lower_bound(classes.begin(), classes.end(), name) - classes.begin()));
  }
  std::vector<std::string> feature_names;
  for (auto c : cols) feature_names.emplace_back(element_symbol(kElements[c]));
  return TaskTable(std::move(x), std::move(labels), std::move(classes), kind, std::move(feature_names), std::move(ids));
}

void write_dataset(const Dataset& ds, const ColumnMapping& m, std::ostream& out) {
  const char d = m.delimiter;
  std::vector<std::string> header;
  header.push_back(m.id.value_or("id"));
  header.insert(header.end(), {m.sample_type, m.botanical, m.region, m.level});
  header.insert(header.end(), m.elements.begin(), m.elements.end());
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? std::string(1, d) : "") << quote_cell(header[i], d);
  out << '\n';
  for (const auto& s : ds.samples()) {
    std::string type = s.sample_type == SampleType::PureHoney         ? m.pure_value
                       : s.sample_type == SampleType::AdulteratedHoney ? m.adulterated_value
                                                                      : m.syrup_value;
    out << quote_cell(s.id, d) << d << quote_cell(type, d) << d << quote_cell(s.botanical.value_or(""), d) << d
        << quote_cell(s.region.value_or(""), d) << d << quote_cell(s.level.value_or(""), d);
    for (const auto& slot : s.minerals.values()) {
      out << d << (slot ? fmt::format("{}", *slot) : m.missing_token);
    }
    out << '\n';
  }
}

DatasetSummary summarize(const Dataset& ds) {
  DatasetSummary out;
  for (const auto& s : ds.samples()) {
    ++out.type_counts[s.sample_type];
    if (s.sample_type != SampleType::Syrup && s.botanical) ++out.botanical_counts[*s.botanical];
    if (s.region) ++out.region_counts[*s.region];
    out.missing_cells += s.minerals.missing_count();
  }
  return out;
}

}  // namespace honeyclf
