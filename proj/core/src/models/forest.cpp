#include "firetke/models/forest.hpp"

#include <atomic>
#include <stdexcept>
#include <thread>

namespace firetke::models {

ForestModel fit_forest(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       const ForestParams& params, std::uint64_t seed,
                       int n_threads) {
  if (params.n_trees < 1)
    throw std::invalid_argument("fit_forest: n_trees must be >= 1");
  const Eigen::Index n = X.rows();
  if (n < 1) throw std::invalid_argument("fit_forest: empty training set");

  ForestModel model;
  model.params = params;
  model.trees.resize(static_cast<std::size_t>(params.n_trees));

  const TreeGrowth growth{params.max_depth, params.min_leaf,
                          params.feature_subsample, 0.0, 0.0};

  auto fit_one = [&](int tree_idx) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(tree_idx)));
    std::vector<Eigen::Index> rows;
    const std::vector<Eigen::Index>* rows_ptr = nullptr;
    if (params.bootstrap) {
      rows.resize(static_cast<std::size_t>(n));
      for (auto& r : rows)
        r = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n)));
      rows_ptr = &rows;
    }
    model.trees[static_cast<std::size_t>(tree_idx)] =
        fit_tree(X, y, growth, &rng, rows_ptr);
  };

  if (n_threads <= 1 || params.n_trees == 1) {
    for (int i = 0; i < params.n_trees; ++i) fit_one(i);
  } else {
    std::atomic<int> next{0};
    const int workers = std::min(n_threads, params.n_trees);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int i = next.fetch_add(1); i < params.n_trees; i = next.fetch_add(1))
          fit_one(i);
      });
    for (auto& thread : pool) thread.join();
  }
  return model;
}

Eigen::VectorXd forest_predict(const ForestModel& model, const Eigen::MatrixXd& X) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(X.rows());
  for (const auto& tree : model.trees) out += tree.predict(X);
  return out / static_cast<double>(model.trees.size());
}

}  // namespace firetke::models
