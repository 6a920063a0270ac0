#include "firetke/models/boosting.hpp"

#include <stdexcept>

namespace firetke::models {

BoostModel fit_boosted(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       const BoostParams& params) {
  if (params.stages < 1)
    throw std::invalid_argument("fit_boosted: stages must be >= 1");
  if (params.shrinkage < 0.0 || params.shrinkage > 1.0)
    throw std::invalid_argument("fit_boosted: shrinkage must be in [0, 1]");
  if (params.gamma < 0.0 || params.leaf_l2 < 0.0)
    throw std::invalid_argument("fit_boosted: regularizers must be >= 0");
  if (X.rows() < 1) throw std::invalid_argument("fit_boosted: empty training set");

  BoostModel model;
  model.base = y.mean();
  model.shrinkage = params.shrinkage;
  model.trees.reserve(static_cast<std::size_t>(params.stages));
  model.train_mse.reserve(static_cast<std::size_t>(params.stages));

  const TreeGrowth growth{params.max_depth, params.min_leaf, -1,
                          params.leaf_l2, params.gamma};
  Eigen::VectorXd residual = y.array() - model.base;
  for (int stage = 0; stage < params.stages; ++stage) {
    RegressionTree tree = fit_tree(X, residual, growth);
    residual -= params.shrinkage * tree.predict(X);
    model.trees.push_back(std::move(tree));
    model.train_mse.push_back(residual.squaredNorm() /
                              static_cast<double>(residual.size()));
  }
  return model;
}

Eigen::VectorXd boosted_predict(const BoostModel& model, const Eigen::MatrixXd& X) {
  Eigen::VectorXd out = Eigen::VectorXd::Constant(X.rows(), model.base);
  for (const auto& tree : model.trees) out += model.shrinkage * tree.predict(X);
  return out;
}

}  // namespace firetke::models
