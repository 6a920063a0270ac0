#include <doctest.h>

#include <cmath>

#include "firetke/models/model.hpp"
#include "firetke/stats.hpp"
#include "test_helpers.hpp"

using namespace firetke;
using namespace firetke::models;

namespace {

// Well-separated inputs keep the kernel system comfortably conditioned for
// coordinate descent.
Eigen::MatrixXd spread_points(std::uint64_t seed, Eigen::Index n, Eigen::Index d) {
  Rng rng(seed);
  Eigen::MatrixXd X(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < d; ++j) X(i, j) = rng.uniform(0.0, 4.0);
  return X;
}

}  // namespace

TEST_CASE("unpenalized coordinate descent solves the interpolation system") {
  const Eigen::MatrixXd X = spread_points(41, 25, 8);
  Rng rng(42);
  Eigen::VectorXd y(25);
  for (Eigen::Index i = 0; i < 25; ++i) y(i) = rng.uniform(-2, 2);

  GprParams params;
  params.length_scale = 0.8;
  params.elastic_net = true;
  params.en_l1 = 0.0;
  params.en_l2 = 0.0;
  params.center_target = false;
  const GprElasticFit fit = fit_gpr_elastic(X, y, params);

  for (Eigen::Index i = 0; i < 25; ++i)
    CHECK(std::abs(fit.predict_one(X.row(i)) - y(i)) < 1e-6);
}

TEST_CASE("l1 at the kill threshold zeroes every weight exactly") {
  const Eigen::MatrixXd X = spread_points(43, 20, 8);
  Rng rng(44);
  Eigen::VectorXd y(20);
  for (Eigen::Index i = 0; i < 20; ++i) y(i) = rng.uniform(-2, 2);

  GprParams params;
  params.length_scale = 0.8;
  // the threshold comes from the fixture itself: max_j |K_j . y|
  const Eigen::MatrixXd K = se_kernel_matrix(X, X, params);
  const double threshold = (K.transpose() * y).cwiseAbs().maxCoeff();

  const Eigen::VectorXd w =
      elastic_net_cd(K, y, threshold * 1.000001, 0.0, 1e-8, 10000);
  for (Eigen::Index j = 0; j < w.size(); ++j) CHECK(w(j) == 0.0);
}

TEST_CASE("pure l2 matches the closed-form ridge solution") {
  const Eigen::MatrixXd X = spread_points(47, 30, 8);
  Rng rng(48);
  Eigen::VectorXd y(30);
  for (Eigen::Index i = 0; i < 30; ++i) y(i) = rng.uniform(-2, 2);

  GprParams params;
  params.length_scale = 0.8;
  const Eigen::MatrixXd K = se_kernel_matrix(X, X, params);

  for (double beta : {0.1, 1.0, 10.0}) {
    const Eigen::VectorXd w = elastic_net_cd(K, y, 0.0, beta, 1e-10, 50000);
    // closed-form oracle: (K^T K + 2 beta I)^{-1} K^T y
    const Eigen::MatrixXd A =
        K.transpose() * K +
        2.0 * beta * Eigen::MatrixXd::Identity(K.cols(), K.cols());
    const Eigen::VectorXd w_ridge = A.ldlt().solve(K.transpose() * y);
    CHECK((w - w_ridge).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("sparsity grows with the l1 penalty") {
  const Eigen::MatrixXd X = spread_points(53, 40, 8);
  Rng rng(54);
  Eigen::VectorXd y(40);
  for (Eigen::Index i = 0; i < 40; ++i) y(i) = rng.uniform(-2, 2);
  GprParams params;
  params.length_scale = 0.8;
  const Eigen::MatrixXd K = se_kernel_matrix(X, X, params);

  const auto nonzeros = [](const Eigen::VectorXd& w) {
    int count = 0;
    for (Eigen::Index i = 0; i < w.size(); ++i)
      if (w(i) != 0.0) ++count;
    return count;
  };
  const Eigen::VectorXd w_light = elastic_net_cd(K, y, 0.01, 0.1, 1e-8, 20000);
  const Eigen::VectorXd w_heavy = elastic_net_cd(K, y, 2.0, 0.1, 1e-8, 20000);
  CHECK(nonzeros(w_heavy) < nonzeros(w_light));
}

TEST_CASE("non-convergence is reported with the final residual") {
  const Eigen::MatrixXd X = spread_points(59, 25, 8);
  Rng rng(60);
  Eigen::VectorXd y(25);
  for (Eigen::Index i = 0; i < 25; ++i) y(i) = rng.uniform(-2, 2);
  GprParams params;
  params.length_scale = 0.8;
  const Eigen::MatrixXd K = se_kernel_matrix(X, X, params);
  try {
    elastic_net_cd(K, y, 0.0, 0.0, 1e-14, 2);
    FAIL("expected non-convergence");
  } catch (const std::exception& e) {
    const std::string what = e.what();
    CHECK(what.find("residual") != std::string::npos);
    CHECK(what.find("2 sweeps") != std::string::npos);
  }
}

TEST_CASE("elastic-net variant through the common interface") {
  Rng rng(61);
  Dataset ds;
  ds.X = spread_points(62, 35, 8);
  ds.y.resize(35);
  for (Eigen::Index i = 0; i < 35; ++i)
    ds.y(i) = 2.0 + std::sin(ds.X(i, 0)) + 0.05 * rng.normal();
  ds.target_name = "y";

  ModelConfig config;
  config.kind = ModelKind::Gpr;
  config.gpr.elastic_net = true;
  config.gpr.en_l1 = 1e-4;
  config.gpr.en_l2 = 1e-3;
  config.gpr.length_scale = 1.0;
  const TrainedModel model = train(config, ds);
  const Eigen::VectorXd pred = model.predict(ds.X);
  // penalized fit still tracks the smooth signal
  std::vector<double> yt(ds.y.data(), ds.y.data() + 35);
  std::vector<double> yp(pred.data(), pred.data() + 35);
  CHECK(firetke::stats::r_squared(yt, yp) > 0.9);
}
