#pragma once

#include <Eigen/Dense>
#include <vector>

#include "firetke/models/tree.hpp"

namespace firetke::models {

struct BoostParams {
  int stages = 200;
  double shrinkage = 0.1;  ///< step size in (0, 1]; 0 degenerates to the base
  int max_depth = 6;
  int min_leaf = 1;
  double gamma = 0.0;      ///< split kept only if its gain exceeds this
  double leaf_l2 = 0.0;    ///< leaf weights shrink as G/(n + leaf_l2)
};

/// Stagewise additive trees on squared loss. Starts from the target mean;
/// each stage fits a tree to the current residuals and adds shrinkage times
/// its prediction. gamma and leaf_l2 realize the regularized variant; both
/// zero gives plain gradient boosting. train_mse records the training error
/// after every stage.
struct BoostModel {
  double base = 0.0;
  double shrinkage = 0.1;
  std::vector<RegressionTree> trees;
  std::vector<double> train_mse;
};

BoostModel fit_boosted(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       const BoostParams& params);

Eigen::VectorXd boosted_predict(const BoostModel& model, const Eigen::MatrixXd& X);

}  // namespace firetke::models
