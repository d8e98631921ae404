#include "honeyclf/classifiers/forest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <set>
#include <thread>

#include "honeyclf/error.hpp"
#include "honeyclf/random.hpp"

namespace honeyclf {

Eigen::VectorXi RandomForest::votes(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  Eigen::VectorXi v = Eigen::VectorXi::Zero(class_count);
  for (const auto& t : trees) ++v(t.predict(x));
  return v;
}

int RandomForest::predict(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  const Eigen::VectorXi v = votes(x);
  int best = 0;
  for (int k = 1; k < class_count; ++k) {
    if (v(k) > v(best)) best = k;
  }
  return best;
}

RandomForest fit_forest(const TaskTable& table, const ForestParams& params, std::uint64_t seed) {
  if (params.trees < 1) throw Error(ErrorKind::InvalidArgument, "forest needs at least one tree");
  if (params.max_features < 0 || params.max_features > table.dims()) {
    throw Error(ErrorKind::InvalidArgument, "max_features must be in [0, d]");
  }
  if (!table.features().allFinite()) throw Error(ErrorKind::InvalidArgument, "forest requires finite (imputed) features");
  std::set<int> distinct(table.labels().begin(), table.labels().end());
  if (distinct.size() < 2) throw Error(ErrorKind::SingleClass, "random forest needs at least two classes");

  const auto n = static_cast<std::size_t>(table.rows());
  const int d = static_cast<int>(table.dims());
  const int m = params.max_features > 0 ? params.max_features
                                        : std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(d)))));
  const int k = static_cast<int>(table.class_count());

  RandomForest forest;
  forest.class_count = k;
  forest.trees.resize(static_cast<std::size_t>(params.trees));

  auto grow_one = [&](std::size_t t) {
    Rng rng(seed ^ static_cast<std::uint64_t>(t));
    std::vector<Eigen::Index> rows(n);
    if (params.bootstrap) {
      for (auto& r : rows) r = static_cast<Eigen::Index>(rng.index(n));
      std::sort(rows.begin(), rows.end());
    } else {
      std::iota(rows.begin(), rows.end(), Eigen::Index{0});
    }
    forest.trees[t] = grow_tree(table.features(), table.labels(), k, std::move(rows), params.tree,
                                FeatureSampling{&rng, m});
  };

  unsigned workers = params.threads > 0 ? static_cast<unsigned>(params.threads) : std::thread::hardware_concurrency();
  workers = std::clamp(workers, 1u, static_cast<unsigned>(params.trees));
  if (workers == 1) {
    for (std::size_t t = 0; t < forest.trees.size(); ++t) grow_one(t);
    return forest;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t t = next++; t < forest.trees.size(); t = next++) grow_one(t);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return forest;
}

}  // namespace honeyclf
