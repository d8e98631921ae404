#include "honeyclf/model.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "honeyclf/error.hpp"
#include "json.hpp"

namespace honeyclf {
namespace {

using nlohmann::json;

json encode_double(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double decode_double(const json& j) {
  if (j.is_number()) return j.get<double>();
  const auto s = j.get<std::string>();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::numeric_limits<double>::quiet_NaN();
}

json encode(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(encode_double(m(r, c)));
    rows.push_back(std::move(row));
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(rows)}};
}

Eigen::MatrixXd decode_matrix(const json& j) {
  Eigen::MatrixXd m(j.at("rows").get<Eigen::Index>(), j.at("cols").get<Eigen::Index>());
  const auto& data = j.at("data");
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = decode_double(data.at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c)));
  }
  return m;
}

json encode(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(encode_double(v(i)));
  return out;
}

Eigen::VectorXd decode_vector(const json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = decode_double(j.at(static_cast<std::size_t>(i)));
  return v;
}

json encode_tree(const DecisionTree& t) {
  json nodes = json::array();
  for (const auto& node : t.nodes) {
    if (const auto* leaf = std::get_if<TreeLeaf>(&node)) {
      nodes.push_back({{"leaf", leaf->label}, {"histogram", leaf->histogram}});
    } else {
      const auto& s = std::get<TreeSplit>(node);
      nodes.push_back({{"feature", s.feature}, {"threshold", s.threshold}, {"left", s.left}, {"right", s.right}});
    }
  }
  return nodes;
}

DecisionTree decode_tree(const json& j) {
  DecisionTree t;
  for (const auto& node : j) {
    if (node.contains("leaf")) {
      t.nodes.emplace_back(TreeLeaf{node.at("leaf").get<int>(), node.at("histogram").get<std::vector<int>>()});
    } else {
      t.nodes.emplace_back(TreeSplit{node.at("feature").get<int>(), node.at("threshold").get<double>(),
                                     node.at("left").get<int>(), node.at("right").get<int>()});
    }
  }
  return t;
}

json encode_params(const ModelParameters& p) {
  return std::visit(
      [](const auto& m) -> json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LinearDiscriminant>) {
          return {{"means", encode(m.means)},     {"priors", encode(m.priors)},   {"pooled", encode(m.pooled)},
                  {"ridge", m.ridge},             {"weights", encode(m.weights)}, {"offsets", encode(m.offsets)}};
        } else if constexpr (std::is_same_v<T, QuadraticDiscriminant>) {
          json factors = json::array();
          for (const auto& f : m.factors) factors.push_back(encode(f));
          return {{"means", encode(m.means)},   {"priors", encode(m.priors)},     {"factors", factors},
                  {"ridges", encode(m.ridges)}, {"log_dets", encode(m.log_dets)}};
        } else if constexpr (std::is_same_v<T, SoftmaxRegression>) {
          return {{"weights", encode(m.weights)}, {"bias", encode(m.bias)}};
        } else if constexpr (std::is_same_v<T, SvmModel>) {
          json machines = json::array();
          for (const auto& b : m.machines) {
            machines.push_back({{"positive", b.positive},
                                {"negative", b.negative},
                                {"support_vectors", encode(b.support_vectors)},
                                {"coefficients", encode(b.coefficients)},
                                {"bias", b.bias}});
          }
          return {{"kernel",
                   {{"type", to_string(m.kernel.type)},
                    {"degree", m.kernel.degree},
                    {"gamma", m.kernel.gamma},
                    {"coef0", m.kernel.coef0}}},
                  {"class_count", m.class_count},
                  {"machines", machines}};
        } else if constexpr (std::is_same_v<T, DecisionTree>) {
          return {{"nodes", encode_tree(m)}};
        } else {
          json trees = json::array();
          for (const auto& t : m.trees) trees.push_back(encode_tree(t));
          return {{"class_count", m.class_count}, {"trees", trees}};
        }
      },
      p);
}

ModelParameters decode_params(Algorithm a, const json& j) {
  switch (a) {
    case Algorithm::LDA: {
      LinearDiscriminant m;
      m.means = decode_matrix(j.at("means"));
      m.priors = decode_vector(j.at("priors"));
      m.pooled = decode_matrix(j.at("pooled"));
      m.ridge = j.at("ridge").get<double>();
      m.weights = decode_matrix(j.at("weights"));
      m.offsets = decode_vector(j.at("offsets"));
      return m;
    }
    case Algorithm::QDA: {
      QuadraticDiscriminant m;
      m.means = decode_matrix(j.at("means"));
      m.priors = decode_vector(j.at("priors"));
      for (const auto& f : j.at("factors")) m.factors.push_back(decode_matrix(f));
      m.ridges = decode_vector(j.at("ridges"));
      m.log_dets = decode_vector(j.at("log_dets"));
      return m;
    }
    case Algorithm::LogisticRegression:
      return SoftmaxRegression{decode_matrix(j.at("weights")), decode_vector(j.at("bias"))};
    case Algorithm::SVM: {
      SvmModel m;
      const auto& k = j.at("kernel");
      m.kernel = Kernel{parse_kernel(k.at("type").get<std::string>()), k.at("degree").get<int>(),
                        k.at("gamma").get<double>(), k.at("coef0").get<double>()};
      m.class_count = j.at("class_count").get<int>();
      for (const auto& b : j.at("machines")) {
        m.machines.push_back(BinaryMachine{b.at("positive").get<int>(), b.at("negative").get<int>(),
                                           decode_matrix(b.at("support_vectors")),
                                           decode_vector(b.at("coefficients")), b.at("bias").get<double>()});
      }
      return m;
    }
    case Algorithm::DecisionTree:
      return decode_tree(j.at("nodes"));
    case Algorithm::RandomForest: {
      RandomForest f;
      f.class_count = j.at("class_count").get<int>();
      for (const auto& t : j.at("trees")) f.trees.push_back(decode_tree(t));
      return f;
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown algorithm");
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorKind::Config, fmt::format("'{}' expects a number, got '{}'", key, text));
  }
  return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
  auto v = to_lower(text);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error(ErrorKind::Config, fmt::format("'{}' expects true/false, got '{}'", key, text));
}

}  // namespace

std::string_view short_name(Algorithm a) {
  switch (a) {
    case Algorithm::LDA: return "LDA";
    case Algorithm::QDA: return "QDA";
    case Algorithm::LogisticRegression: return "LR";
    case Algorithm::SVM: return "SVM";
    case Algorithm::DecisionTree: return "DT";
    case Algorithm::RandomForest: return "RF";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view s) {
  auto v = to_lower(s);
  if (v == "lda") return Algorithm::LDA;
  if (v == "qda") return Algorithm::QDA;
  if (v == "lr" || v == "logreg" || v == "logistic") return Algorithm::LogisticRegression;
  if (v == "svm") return Algorithm::SVM;
  if (v == "dt" || v == "tree") return Algorithm::DecisionTree;
  if (v == "rf" || v == "forest") return Algorithm::RandomForest;
  throw Error(ErrorKind::Config, fmt::format("unknown model '{}' (SVM|LDA|QDA|LR|DT|RF|all)", s));
}

std::vector<Algorithm> parse_algorithms(std::string_view s) {
  if (to_lower(trim(s)) == "all") return {std::begin(kAllAlgorithms), std::end(kAllAlgorithms)};
  std::vector<Algorithm> out;
  for (const auto& item : split_list(s)) {
    auto a = parse_algorithm(item);
    if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
  }
  if (out.empty()) throw Error(ErrorKind::Config, "at least one model is required");
  return out;
}

void ModelSpec::validate() const {
  auto bad = [](const std::string& what) { throw Error(ErrorKind::InvalidArgument, what); };
  switch (algorithm) {
    case Algorithm::LDA:
    case Algorithm::QDA:
      if (!(discriminant.ridge_start > 0.0) || discriminant.ridge_limit < discriminant.ridge_start) {
        bad("discriminant ridge bounds must satisfy 0 < start <= limit");
      }
      break;
    case Algorithm::LogisticRegression:
      if (!(logistic.lambda >= 0.0)) bad("logreg lambda must be >= 0");
      if (logistic.max_iterations < 1) bad("logreg max_iterations must be >= 1");
      if (!(logistic.gradient_tolerance > 0.0)) bad("logreg gradient_tolerance must be > 0");
      break;
    case Algorithm::SVM:
      if (!(svm.c > 0.0)) bad("svm C must be > 0");
      if (!(svm.tolerance > 0.0)) bad("svm tolerance must be > 0");
      if (svm.kernel.degree < 1) bad("svm polynomial degree must be >= 1");
      if (svm.kernel.gamma < 0.0) bad("svm gamma must be >= 0");
      break;
    case Algorithm::DecisionTree:
      if (tree.max_depth < 0) bad("tree max_depth must be >= 0");
      if (tree.min_samples_leaf < 1) bad("tree min_samples_leaf must be >= 1");
      break;
    case Algorithm::RandomForest:
      if (forest.trees < 1) bad("forest trees must be >= 1");
      if (forest.max_features < 0) bad("forest max_features must be >= 0");
      if (forest.tree.max_depth < 0) bad("forest max_depth must be >= 0");
      if (forest.tree.min_samples_leaf < 1) bad("forest min_samples_leaf must be >= 1");
      break;
  }
}

std::map<std::string, std::string> ModelSpec::hyperparameters() const {
  std::map<std::string, std::string> h;
  switch (algorithm) {
    case Algorithm::LDA:
    case Algorithm::QDA:
      h["ridge_start"] = fmt::format("{}", discriminant.ridge_start);
      h["ridge_limit"] = fmt::format("{}", discriminant.ridge_limit);
      break;
    case Algorithm::LogisticRegression:
      h["lambda"] = fmt::format("{}", logistic.lambda);
      h["max_iterations"] = fmt::format("{}", logistic.max_iterations);
      h["gradient_tolerance"] = fmt::format("{}", logistic.gradient_tolerance);
      break;
    case Algorithm::SVM:
      h["c"] = fmt::format("{}", svm.c);
      h["kernel"] = std::string(to_string(svm.kernel.type));
      h["degree"] = fmt::format("{}", svm.kernel.degree);
      h["gamma"] = svm.kernel.gamma > 0.0 ? fmt::format("{}", svm.kernel.gamma) : "1/d";
      h["coef0"] = fmt::format("{}", svm.kernel.coef0);
      h["tolerance"] = fmt::format("{}", svm.tolerance);
      break;
    case Algorithm::DecisionTree:
      h["max_depth"] = tree.max_depth > 0 ? fmt::format("{}", tree.max_depth) : "unlimited";
      h["min_samples_leaf"] = fmt::format("{}", tree.min_samples_leaf);
      break;
    case Algorithm::RandomForest:
      h["trees"] = fmt::format("{}", forest.trees);
      h["max_features"] = forest.max_features > 0 ? fmt::format("{}", forest.max_features) : "floor(sqrt(d))";
      h["bootstrap"] = forest.bootstrap ? "true" : "false";
      h["max_depth"] = forest.tree.max_depth > 0 ? fmt::format("{}", forest.tree.max_depth) : "unlimited";
      h["min_samples_leaf"] = fmt::format("{}", forest.tree.min_samples_leaf);
      break;
  }
  h["seed"] = fmt::format("{}", seed);
  return h;
}

std::vector<std::string> ModelSpec::override_keys() {
  return {"discriminant.ridge_start", "discriminant.ridge_limit", "logreg.lambda",
          "logreg.max_iterations",    "logreg.gradient_tolerance", "svm.c",
          "svm.kernel",               "svm.degree",                "svm.gamma",
          "svm.coef0",                "svm.tolerance",             "tree.max_depth",
          "tree.min_samples_leaf",    "forest.trees",              "forest.max_features",
          "forest.bootstrap",         "forest.max_depth",          "forest.min_samples_leaf",
          "forest.threads"};
}

void ModelSpec::apply_overrides(const KeyValueConfig& cfg) {
  auto num = [&](const char* key, auto& field) {
    if (auto v = cfg.get(key)) field = parse_number<std::decay_t<decltype(field)>>(key, *v);
  };
  num("discriminant.ridge_start", discriminant.ridge_start);
  num("discriminant.ridge_limit", discriminant.ridge_limit);
  num("logreg.lambda", logistic.lambda);
  num("logreg.max_iterations", logistic.max_iterations);
  num("logreg.gradient_tolerance", logistic.gradient_tolerance);
  num("svm.c", svm.c);
  if (auto v = cfg.get("svm.kernel")) svm.kernel.type = parse_kernel(*v);
  num("svm.degree", svm.kernel.degree);
  num("svm.gamma", svm.kernel.gamma);
  num("svm.coef0", svm.kernel.coef0);
  num("svm.tolerance", svm.tolerance);
  num("tree.max_depth", tree.max_depth);
  num("tree.min_samples_leaf", tree.min_samples_leaf);
  num("forest.trees", forest.trees);
  num("forest.max_features", forest.max_features);
  if (auto v = cfg.get("forest.bootstrap")) forest.bootstrap = parse_bool("forest.bootstrap", *v);
  num("forest.max_depth", forest.tree.max_depth);
  num("forest.min_samples_leaf", forest.tree.min_samples_leaf);
  num("forest.threads", forest.threads);
}

std::string ModelSpec::to_json() const {
  json j = {{"algorithm", short_name(algorithm)},
            {"seed", seed},
            {"discriminant", {{"ridge_start", discriminant.ridge_start}, {"ridge_limit", discriminant.ridge_limit}}},
            {"logistic",
             {{"lambda", logistic.lambda},
              {"max_iterations", logistic.max_iterations},
              {"gradient_tolerance", logistic.gradient_tolerance}}},
            {"svm",
             {{"c", svm.c},
              {"kernel", to_string(svm.kernel.type)},
              {"degree", svm.kernel.degree},
              {"gamma", svm.kernel.gamma},
              {"coef0", svm.kernel.coef0},
              {"tolerance", svm.tolerance}}},
            {"tree", {{"max_depth", tree.max_depth}, {"min_samples_leaf", tree.min_samples_leaf}}},
            {"forest",
             {{"trees", forest.trees},
              {"max_features", forest.max_features},
              {"bootstrap", forest.bootstrap},
              {"max_depth", forest.tree.max_depth},
              {"min_samples_leaf", forest.tree.min_samples_leaf}}}};
  return j.dump();
}

ModelSpec ModelSpec::from_json(std::string_view text) {
  try {
    const json s = json::parse(text);
    ModelSpec spec;
    spec.algorithm = parse_algorithm(s.at("algorithm").get<std::string>());
    spec.seed = s.at("seed").get<std::uint64_t>();
    spec.discriminant = {s.at("discriminant").at("ridge_start").get<double>(),
                         s.at("discriminant").at("ridge_limit").get<double>()};
    spec.logistic = {s.at("logistic").at("lambda").get<double>(), s.at("logistic").at("max_iterations").get<int>(),
                     s.at("logistic").at("gradient_tolerance").get<double>()};
    const auto& sv = s.at("svm");
    spec.svm.c = sv.at("c").get<double>();
    spec.svm.kernel = Kernel{parse_kernel(sv.at("kernel").get<std::string>()), sv.at("degree").get<int>(),
                             sv.at("gamma").get<double>(), sv.at("coef0").get<double>()};
    spec.svm.tolerance = sv.at("tolerance").get<double>();
    spec.tree = {s.at("tree").at("max_depth").get<int>(), s.at("tree").at("min_samples_leaf").get<int>()};
    const auto& f = s.at("forest");
    spec.forest.trees = f.at("trees").get<int>();
    spec.forest.max_features = f.at("max_features").get<int>();
    spec.forest.bootstrap = f.at("bootstrap").get<bool>();
    spec.forest.tree = {f.at("max_depth").get<int>(), f.at("min_samples_leaf").get<int>()};
    return spec;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Io, fmt::format("malformed model spec: {}", e.what()));
  }
}

TrainedModel::TrainedModel(ModelSpec spec, std::vector<std::string> classes, Eigen::Index dims, ModelParameters params)
    : spec_(std::move(spec)), classes_(std::move(classes)), dims_(dims), params_(std::move(params)) {}

int TrainedModel::predict_index(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != dims_) {
    throw Error(ErrorKind::DimensionMismatch, fmt::format("model expects {} features, got {}", dims_, x.size()));
  }
  return std::visit(
      [&](const auto& m) -> int {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LinearDiscriminant> || std::is_same_v<T, QuadraticDiscriminant>) {
          return argmax_lowest(m.scores(x));
        } else if constexpr (std::is_same_v<T, SoftmaxRegression>) {
          return argmax_lowest(m.logits(x));
        } else {
          return m.predict(x);
        }
      },
      params_);
}

std::string TrainedModel::predict(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  return classes_[static_cast<std::size_t>(predict_index(x))];
}

std::vector<int> TrainedModel::predict_indices(const Eigen::MatrixXd& x) const {
  if (x.rows() > 0 && x.cols() != dims_) {
    throw Error(ErrorKind::DimensionMismatch, fmt::format("model expects {} features, got {}", dims_, x.cols()));
  }
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index r = 0; r < x.rows(); ++r) out.push_back(predict_index(x.row(r).transpose()));
  return out;
}

std::vector<std::string> TrainedModel::predict_batch(const Eigen::MatrixXd& x) const {
  std::vector<std::string> out;
  for (int k : predict_indices(x)) out.push_back(classes_[static_cast<std::size_t>(k)]);
  return out;
}

std::string TrainedModel::serialize() const {
  json j;
  j["format"] = "honeyclf-model/1";
  j["algorithm"] = short_name(spec_.algorithm);
  j["seed"] = spec_.seed;
  j["hyperparameters"] = spec_.hyperparameters();
  j["spec"] = json::parse(spec_.to_json());
  j["classes"] = classes_;
  j["dims"] = dims_;
  j["parameters"] = encode_params(params_);
  return j.dump(1);
}

TrainedModel TrainedModel::load(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Io, fmt::format("model artifact is not valid JSON: {}", e.what()));
  }
  try {
    if (j.value("format", "") != "honeyclf-model/1") throw Error(ErrorKind::Io, "unrecognized model artifact format");
    const ModelSpec spec = ModelSpec::from_json(j.at("spec").dump());
    return TrainedModel(spec, j.at("classes").get<std::vector<std::string>>(), j.at("dims").get<Eigen::Index>(),
                        decode_params(spec.algorithm, j.at("parameters")));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Io, fmt::format("malformed model artifact: {}", e.what()));
  }
}

TrainedModel fit(const TaskTable& table, const ModelSpec& spec) {
  spec.validate();
  ModelParameters params = [&]() -> ModelParameters {
    switch (spec.algorithm) {
      case Algorithm::LDA: return fit_lda(table, spec.discriminant);
      case Algorithm::QDA: return fit_qda(table, spec.discriminant);
      case Algorithm::LogisticRegression: return fit_logreg(table, spec.logistic);
      case Algorithm::SVM: return fit_svm(table, spec.svm);
      case Algorithm::DecisionTree: return fit_tree(table, spec.tree);
      case Algorithm::RandomForest: return fit_forest(table, spec.forest, spec.seed);
    }
    throw Error(ErrorKind::InvalidArgument, "unknown algorithm");
  }();
  return TrainedModel(spec, table.classes(), table.dims(), std::move(params));
}

}  // namespace honeyclf
