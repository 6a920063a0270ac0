#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "firetke/models/tree.hpp"

namespace firetke::models {

struct ForestParams {
  int n_trees = 100;
  int max_depth = -1;
  int min_leaf = 1;
  int feature_subsample = -1;  ///< features tried per split; <=0: all
  bool bootstrap = true;
};

/// Bagged regression trees. Tree i draws its bootstrap sample and split
/// features from a child generator seeded by (seed, i), so the fit is
/// bit-identical for any thread count.
struct ForestModel {
  std::vector<RegressionTree> trees;
  ForestParams params;
};

ForestModel fit_forest(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       const ForestParams& params, std::uint64_t seed,
                       int n_threads = 1);

/// Ensemble mean, accumulated in tree order.
Eigen::VectorXd forest_predict(const ForestModel& model, const Eigen::MatrixXd& X);

}  // namespace firetke::models
