#include "honeyclf/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <memory>
#include <numeric>

#include <fmt/format.h>

#include "honeyclf/error.hpp"
#include "honeyclf/random.hpp"

namespace honeyclf {

std::vector<std::size_t> FoldAssignment::fold_sizes() const {
  std::vector<std::size_t> sizes(static_cast<std::size_t>(k), 0);
  for (int f : fold) ++sizes[static_cast<std::size_t>(f)];
  return sizes;
}

std::vector<Eigen::Index> FoldAssignment::test_rows(int f) const {
  std::vector<Eigen::Index> rows;
  for (std::size_t i = 0; i < fold.size(); ++i) {
    if (fold[i] == f) rows.push_back(static_cast<Eigen::Index>(i));
  }
  return rows;
}

std::vector<Eigen::Index> FoldAssignment::train_rows(int f) const {
  std::vector<Eigen::Index> rows;
  for (std::size_t i = 0; i < fold.size(); ++i) {
    if (fold[i] != f) rows.push_back(static_cast<Eigen::Index>(i));
  }
  return rows;
}

FoldAssignment stratified_folds(const TaskTable& table, int k, std::uint64_t seed) {
  if (k < 2) throw Error(ErrorKind::TooFewSamples, fmt::format("need k >= 2 folds, got {}", k));
  if (table.rows() < k) {
    throw Error(ErrorKind::TooFewSamples, fmt::format("{} rows cannot fill {} folds", table.rows(), k));
  }
  FoldAssignment out;
  out.k = k;
  out.seed = seed;
  out.fold.assign(static_cast<std::size_t>(table.rows()), -1);

  std::vector<std::vector<std::size_t>> by_class(table.class_count());
  for (std::size_t i = 0; i < table.labels().size(); ++i) by_class[static_cast<std::size_t>(table.labels()[i])].push_back(i);

  Rng rng(seed);
  std::size_t next = 0;
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    auto& rows = by_class[c];
    if (rows.empty()) continue;
    if (rows.size() < static_cast<std::size_t>(k)) {
      out.warnings.push_back(fmt::format("class '{}' has {} samples; only {} of {} folds contain it",
                                         table.classes()[c], rows.size(), rows.size(), k));
    }
    rng.shuffle(rows);
    for (auto r : rows) {
      out.fold[r] = static_cast<int>(next % static_cast<std::size_t>(k));
      ++next;
    }
  }
  return out;
}

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> classes)
    : classes_(std::move(classes)),
      counts_(Counts::Zero(static_cast<Eigen::Index>(classes_.size()), static_cast<Eigen::Index>(classes_.size()))) {}

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> classes, Counts counts)
    : classes_(std::move(classes)), counts_(std::move(counts)) {
  const auto k = static_cast<Eigen::Index>(classes_.size());
  if (counts_.rows() != k || counts_.cols() != k) throw Error(ErrorKind::DimensionMismatch, "confusion counts must be K x K");
  if ((counts_.array() < 0).any()) throw Error(ErrorKind::InvalidArgument, "confusion counts must be >= 0");
}

void ConfusionMatrix::add(int truth, int predicted) {
  const auto k = static_cast<int>(classes_.size());
  if (truth < 0 || truth >= k || predicted < 0 || predicted >= k) {
    throw Error(ErrorKind::UnknownLabel, fmt::format("label index out of range ({}, {})", truth, predicted));
  }
  ++counts_(truth, predicted);
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  if (other.classes_ != classes_) throw Error(ErrorKind::InvalidArgument, "cannot add confusion matrices over different classes");
  counts_ += other.counts_;
  return *this;
}

ConfusionMatrix compute_confusion(const std::vector<int>& truth, const std::vector<int>& predicted,
                                  const std::vector<std::string>& classes) {
  if (truth.size() != predicted.size()) {
    throw Error(ErrorKind::LengthMismatch, fmt::format("{} truths vs {} predictions", truth.size(), predicted.size()));
  }
  ConfusionMatrix cm(classes);
  for (std::size_t i = 0; i < truth.size(); ++i) cm.add(truth[i], predicted[i]);
  return cm;
}

ConfusionMatrix compute_confusion(const std::vector<std::string>& truth, const std::vector<std::string>& predicted,
                                  const std::vector<std::string>& classes) {
  if (truth.size() != predicted.size()) {
    throw Error(ErrorKind::LengthMismatch, fmt::format("{} truths vs {} predictions", truth.size(), predicted.size()));
  }
  auto index = [&](const std::string& name) {
    auto it = std::find(classes.begin(), classes.end(), name);
    if (it == classes.end()) throw Error(ErrorKind::UnknownLabel, fmt::format("label '{}' is not a known class", name));
    return static_cast<int>(it - classes.begin());
  };
  std::vector<int> t, p;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    t.push_back(index(truth[i]));
    p.push_back(index(predicted[i]));
  }
  return compute_confusion(t, p, classes);
}

ClassMetrics per_class_metrics(const ConfusionMatrix& cm) {
  const long total = cm.total();
  if (total <= 0) throw Error(ErrorKind::EmptyMatrix, "per-class metrics need a nonempty confusion matrix");
  const auto& c = cm.counts();
  ClassMetrics out;
  for (Eigen::Index k = 0; k < c.rows(); ++k) {
    const long tp = c(k, k);
    const long support = c.row(k).sum();
    const long predicted = c.col(k).sum();
    const long fp = predicted - tp;
    const long negatives = total - support;

    ClassMetric m;
    m.name = cm.classes()[static_cast<std::size_t>(k)];
    m.support = support;
    m.recall = support > 0 ? static_cast<double>(tp) / static_cast<double>(support) : 0.0;
    m.tp_rate = m.recall;
    m.fp_rate = negatives > 0 ? static_cast<double>(fp) / static_cast<double>(negatives) : 0.0;
    if (predicted > 0) m.precision = static_cast<double>(tp) / static_cast<double>(predicted);
    if (m.precision && *m.precision + m.recall > 0.0) {
      m.f_measure = 2.0 * *m.precision * m.recall / (*m.precision + m.recall);
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::string_view to_string(Averaging a) { return a == Averaging::Weighted ? "weighted" : "macro"; }

AggregateMetrics aggregate_metrics(const ClassMetrics& metrics, const ConfusionMatrix& cm, Averaging averaging) {
  AggregateMetrics out;
  const long total = cm.total();
  out.accuracy = total > 0 ? 100.0 * static_cast<double>(cm.trace()) / static_cast<double>(total) : 0.0;

  double weight_sum = 0.0, p = 0.0, r = 0.0, f = 0.0;
  bool p_defined = true, f_defined = true;
  for (const auto& m : metrics) {
    if (m.support <= 0) continue;
    const double w = averaging == Averaging::Weighted ? static_cast<double>(m.support) : 1.0;
    weight_sum += w;
    r += w * m.recall;
    if (m.precision) p += w * *m.precision; else p_defined = false;
    if (m.f_measure) f += w * *m.f_measure; else f_defined = false;
  }
  if (weight_sum > 0.0) {
    out.recall = r / weight_sum;
    if (p_defined) out.precision = p / weight_sum;
    if (p_defined && f_defined) out.f_measure = f / weight_sum;
  }
  return out;
}

EvaluationReport cross_validate(const TaskTable& table, const Learner& learner, int k, std::uint64_t seed,
                                PreprocessMode mode, Averaging averaging) {
  const auto start = std::chrono::steady_clock::now();
  EvaluationReport report;
  report.mode = mode;
  report.averaging = averaging;
  report.folds = stratified_folds(table, k, seed);
  report.row_ids = table.row_ids();

  TaskTable data = impute_missing(table);
  if (mode == PreprocessMode::GlobalFit) data = apply_scaler(fit_scaler(data), data);

  ConfusionMatrix pooled(table.classes());
  report.predictions.assign(static_cast<std::size_t>(table.rows()), -1);
  for (int f = 0; f < k; ++f) {
    const auto test = report.folds.test_rows(f);
    if (test.empty()) continue;
    const auto train = report.folds.train_rows(f);
    try {
      TaskTable train_table = data.subset(train);
      Eigen::MatrixXd test_x(static_cast<Eigen::Index>(test.size()), data.dims());
      for (std::size_t i = 0; i < test.size(); ++i) test_x.row(static_cast<Eigen::Index>(i)) = data.features().row(test[i]);
      if (mode == PreprocessMode::PerFoldFit) {
        const auto scaler = fit_scaler(train_table);
        train_table = apply_scaler(scaler, train_table);
        test_x = scaler.transform(test_x);
      }
      const auto predictor = learner(train_table);
      const auto predicted = predictor(test_x);
      if (predicted.size() != test.size()) throw Error(ErrorKind::LengthMismatch, "predictor returned wrong count");
      for (std::size_t i = 0; i < test.size(); ++i) {
        const auto row = static_cast<std::size_t>(test[i]);
        pooled.add(table.labels()[row], predicted[i]);
        report.predictions[row] = predicted[i];
      }
    } catch (const Error& e) {
      throw Error(e.kind(), fmt::format("fold {}: {}", f, e.detail()));
    }
  }
  report.confusion = pooled;
  report.per_class = per_class_metrics(pooled);
  report.aggregate = aggregate_metrics(report.per_class, pooled, averaging);
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

EvaluationReport cross_validate(const TaskTable& table, const ModelSpec& spec, int k, std::uint64_t seed,
                                PreprocessMode mode, Averaging averaging) {
  spec.validate();
  Learner learner = [&spec](const TaskTable& train) -> Predictor {
    auto model = std::make_shared<TrainedModel>(fit(train, spec));
    return [model](const Eigen::MatrixXd& x) { return model->predict_indices(x); };
  };
  auto report = cross_validate(table, learner, k, seed, mode, averaging);
  report.spec = spec;
  return report;
}

}  // namespace honeyclf
