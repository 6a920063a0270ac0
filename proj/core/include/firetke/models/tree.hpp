#pragma once

#include <Eigen/Dense>
#include <vector>

#include "firetke/rng.hpp"

namespace firetke::models {

struct TreeNode {
  int feature = -1;  ///< -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;  ///< leaf prediction
};

struct RegressionTree {
  std::vector<TreeNode> nodes;

  bool empty() const { return nodes.empty(); }
  double predict_row(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;
  Eigen::VectorXd predict(const Eigen::MatrixXd& X) const;
  int leaf_count() const;
  int depth() const;
};

/// Growth controls for the exact-greedy CART builder. Candidate splits are
/// enumerated over sorted feature values; the kept split maximizes
///   G_L^2/(n_L+a) + G_R^2/(n_R+a) - G^2/(n+a)
/// where G sums the node's targets and `a` is leaf_l2. With a = 0 this is
/// the plain variance-reduction criterion and leaves predict their target
/// mean; with a > 0 leaves shrink toward zero as G/(n+a). A split is kept
/// only when half the score improvement exceeds split_penalty.
struct TreeGrowth {
  int max_depth = -1;          ///< negative: unlimited
  int min_leaf = 1;
  int feature_subsample = -1;  ///< features tried per split; <=0 or >=d: all
  double leaf_l2 = 0.0;
  double split_penalty = 0.0;
};

/// Fits one regression tree on (X, y). `rng` drives per-split feature
/// subsampling and may be null when all features are considered.
/// `row_indices` optionally restricts/weights the rows (bootstrap samples
/// repeat indices); null means all rows once.
RegressionTree fit_tree(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                        const TreeGrowth& growth, Rng* rng = nullptr,
                        const std::vector<Eigen::Index>* row_indices = nullptr);

}  // namespace firetke::models
