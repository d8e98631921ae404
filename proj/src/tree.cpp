#include "honeyclf/classifiers/tree.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "honeyclf/error.hpp"
#include "honeyclf/random.hpp"

namespace honeyclf {
namespace {

// Tolerance for treating two weighted impurities as equal.
constexpr double kTieEps = 1e-12;

std::vector<int> histogram_of(std::span<const int> labels, int class_count, std::span<const Eigen::Index> rows) {
  std::vector<int> h(static_cast<std::size_t>(class_count), 0);
  for (auto r : rows) ++h[static_cast<std::size_t>(labels[static_cast<std::size_t>(r)])];
  return h;
}

// sum of squared counts, so gini = 1 - sq / n^2
double sum_sq(const std::vector<int>& h) {
  double s = 0.0;
  for (int c : h) s += static_cast<double>(c) * static_cast<double>(c);
  return s;
}

class Grower {
 public:
  Grower(const Eigen::MatrixXd& x, std::span<const int> labels, int class_count, const TreeParams& params,
         FeatureSampling sampling)
      : x_(x), labels_(labels), class_count_(class_count), params_(params), sampling_(sampling) {
    all_features_.resize(static_cast<std::size_t>(x.cols()));
    std::iota(all_features_.begin(), all_features_.end(), 0);
  }

  int grow(std::vector<Eigen::Index> rows, int depth) {
    auto hist = histogram_of(labels_, class_count_, rows);
    const int index = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back(TreeLeaf{majority(hist), hist});

    const bool depth_ok = params_.max_depth <= 0 || depth < params_.max_depth;
    if (!depth_ok || rows.size() < 2 * static_cast<std::size_t>(std::max(1, params_.min_samples_leaf))) return index;

    auto split = best_split(x_, labels_, class_count_, rows, candidates(), params_.min_samples_leaf);
    if (!split) return index;

    std::vector<Eigen::Index> left, right;
    for (auto r : rows) (x_(r, split->feature) <= split->threshold ? left : right).push_back(r);
    rows.clear();
    rows.shrink_to_fit();

    const int l = grow(std::move(left), depth + 1);
    const int r = grow(std::move(right), depth + 1);
    tree_.nodes[static_cast<std::size_t>(index)] = TreeSplit{split->feature, split->threshold, l, r};
    return index;
  }

  DecisionTree take() { return std::move(tree_); }

 private:
  std::vector<int> candidates() {
    const int d = static_cast<int>(all_features_.size());
    if (!sampling_.rng || sampling_.features_per_node <= 0 || sampling_.features_per_node >= d) return all_features_;
    // partial Fisher-Yates over a fresh copy
    std::vector<int> pool = all_features_;
    for (int i = 0; i < sampling_.features_per_node; ++i) {
      const auto j = i + static_cast<int>(sampling_.rng->index(static_cast<std::uint64_t>(d - i)));
      std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    pool.resize(static_cast<std::size_t>(sampling_.features_per_node));
    std::sort(pool.begin(), pool.end());
    return pool;
  }

  const Eigen::MatrixXd& x_;
  std::span<const int> labels_;
  int class_count_;
  TreeParams params_;
  FeatureSampling sampling_;
  std::vector<int> all_features_;
  DecisionTree tree_;
};

}  // namespace

double gini(std::span<const int> histogram, int total) {
  if (total <= 0) return 0.0;
  double s = 0.0;
  for (int c : histogram) {
    const double p = static_cast<double>(c) / total;
    s += p * p;
  }
  return 1.0 - s;
}

int majority(std::span<const int> histogram) {
  int best = 0;
  for (std::size_t k = 1; k < histogram.size(); ++k) {
    if (histogram[k] > histogram[static_cast<std::size_t>(best)]) best = static_cast<int>(k);
  }
  return best;
}

std::optional<SplitChoice> best_split(const Eigen::MatrixXd& x, std::span<const int> labels, int class_count,
                                      std::span<const Eigen::Index> rows, std::span<const int> features,
                                      int min_samples_leaf) {
  if (rows.empty()) throw Error(ErrorKind::EmptyRowSet, "best_split needs at least one row");
  const int n = static_cast<int>(rows.size());
  const auto parent = histogram_of(labels, class_count, rows);
  const double parent_gini = gini(parent, n);
  if (parent_gini <= 0.0) return std::nullopt;
  const int min_leaf = std::max(1, min_samples_leaf);

  std::vector<int> feats(features.begin(), features.end());
  std::sort(feats.begin(), feats.end());
  feats.erase(std::unique(feats.begin(), feats.end()), feats.end());

  std::optional<SplitChoice> best;
  double best_weighted = 0.0;
  std::vector<Eigen::Index> order(rows.begin(), rows.end());
  std::vector<int> left(static_cast<std::size_t>(class_count));
  std::vector<int> right(static_cast<std::size_t>(class_count));
  for (int f : feats) {
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return x(a, f) < x(b, f); });
    std::fill(left.begin(), left.end(), 0);
    right = parent;
    for (int i = 0; i + 1 < n; ++i) {
      const int y = labels[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
      ++left[static_cast<std::size_t>(y)];
      --right[static_cast<std::size_t>(y)];
      const double lo = x(order[static_cast<std::size_t>(i)], f);
      const double hi = x(order[static_cast<std::size_t>(i + 1)], f);
      if (!(lo < hi)) continue;
      const int nl = i + 1;
      const int nr = n - nl;
      if (nl < min_leaf || nr < min_leaf) continue;
      // n * weighted gini = nl - sq_l/nl + nr - sq_r/nr
      const double weighted = (n - sum_sq(left) / nl - sum_sq(right) / nr) / n;
      if (!best || weighted < best_weighted - kTieEps) {
        double threshold = lo + (hi - lo) / 2.0;
        if (!(threshold < hi)) threshold = lo;
        best = SplitChoice{f, threshold, parent_gini - weighted};
        best_weighted = weighted;
      }
    }
  }
  if (best && best->impurity_decrease < 0.0) best->impurity_decrease = 0.0;
  return best;
}

DecisionTree grow_tree(const Eigen::MatrixXd& x, std::span<const int> labels, int class_count,
                       std::vector<Eigen::Index> rows, const TreeParams& params, FeatureSampling sampling) {
  if (rows.empty()) throw Error(ErrorKind::EmptyRowSet, "cannot grow a tree on zero rows");
  if (params.min_samples_leaf < 1) throw Error(ErrorKind::InvalidArgument, "min_samples_leaf must be >= 1");
  Grower g(x, labels, class_count, params, sampling);
  g.grow(std::move(rows), 0);
  return g.take();
}

DecisionTree fit_tree(const TaskTable& table, const TreeParams& params) {
  if (!table.features().allFinite()) throw Error(ErrorKind::InvalidArgument, "tree requires finite (imputed) features");
  std::set<int> distinct(table.labels().begin(), table.labels().end());
  if (distinct.size() < 2) throw Error(ErrorKind::SingleClass, "decision tree needs at least two classes");
  std::vector<Eigen::Index> rows(static_cast<std::size_t>(table.rows()));
  std::iota(rows.begin(), rows.end(), Eigen::Index{0});
  return grow_tree(table.features(), table.labels(), static_cast<int>(table.class_count()), std::move(rows), params);
}

int DecisionTree::predict(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  std::size_t at = 0;
  while (true) {
    const auto& node = nodes[at];
    if (const auto* leaf = std::get_if<TreeLeaf>(&node)) return leaf->label;
    const auto& split = std::get<TreeSplit>(node);
    at = static_cast<std::size_t>(x(split.feature) <= split.threshold ? split.left : split.right);
  }
}

int DecisionTree::depth() const {
  if (nodes.empty()) return 0;
  int deepest = 0;
  std::vector<std::pair<std::size_t, int>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [at, d] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, d);
    if (const auto* split = std::get_if<TreeSplit>(&nodes[at])) {
      stack.emplace_back(static_cast<std::size_t>(split->left), d + 1);
      stack.emplace_back(static_cast<std::size_t>(split->right), d + 1);
    }
  }
  return deepest;
}

std::size_t DecisionTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return std::holds_alternative<TreeLeaf>(n); }));
}

}  // namespace honeyclf
