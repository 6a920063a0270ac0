#include "firetke/models/knn.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

#include <fmt/format.h>

namespace firetke::models {

double knn_predict_one(const KnnModel& model,
                       const Eigen::Ref<const Eigen::RowVectorXd>& query) {
  const Eigen::Index n = model.X.rows();
  if (model.k < 1 || model.k > n)
    throw std::invalid_argument(
        fmt::format("knn: k={} out of range for {} training rows", model.k, n));
  if (query.size() != model.X.cols())
    throw std::invalid_argument("knn: query dimension mismatch");

  std::vector<std::pair<double, Eigen::Index>> dist(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    dist[static_cast<std::size_t>(i)] = {(model.X.row(i) - query).squaredNorm(), i};

  const auto kth = dist.begin() + model.k;
  std::nth_element(dist.begin(), kth - 1, dist.end());
  // accumulate in ascending row order so the result does not depend on the
  // partial ordering nth_element happens to leave behind
  std::vector<Eigen::Index> picked;
  picked.reserve(static_cast<std::size_t>(model.k));
  for (auto it = dist.begin(); it != kth; ++it) picked.push_back(it->second);
  std::sort(picked.begin(), picked.end());
  double sum = 0.0;
  for (Eigen::Index idx : picked) sum += model.y(idx);
  return sum / static_cast<double>(model.k);
}

Eigen::VectorXd knn_predict(const KnnModel& model, const Eigen::MatrixXd& queries) {
  Eigen::VectorXd out(queries.rows());
  for (Eigen::Index r = 0; r < queries.rows(); ++r)
    out(r) = knn_predict_one(model, queries.row(r));
  return out;
}

}  // namespace firetke::models
