#pragma once

#include <Eigen/Dense>

namespace firetke::models {

/// k-nearest-neighbor regressor state: the (scaled) training matrix is the
/// model. Ties at the k-th Euclidean distance break toward the lowest row
/// index, making predictions order-deterministic.
struct KnnModel {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  int k = 5;
};

double knn_predict_one(const KnnModel& model,
                       const Eigen::Ref<const Eigen::RowVectorXd>& query);
Eigen::VectorXd knn_predict(const KnnModel& model, const Eigen::MatrixXd& queries);

}  // namespace firetke::models
