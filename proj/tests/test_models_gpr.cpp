#include <doctest.h>

#include <cmath>

#include "firetke/models/model.hpp"
#include "test_helpers.hpp"

using namespace firetke;
using namespace firetke::models;

namespace {

Eigen::MatrixXd random_points(std::uint64_t seed, Eigen::Index n, Eigen::Index d) {
  Rng rng(seed);
  Eigen::MatrixXd X(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < d; ++j) X(i, j) = rng.normal();
  return X;
}

}  // namespace

TEST_CASE("noise-free GP interpolates its training data") {
  const Eigen::MatrixXd X = random_points(7, 50, 8);
  Rng rng(8);
  Eigen::VectorXd y(50);
  for (Eigen::Index i = 0; i < 50; ++i) y(i) = rng.uniform(-3, 3);

  GprParams params;
  params.length_scale = 1.0;
  params.signal_var = 1.0;
  params.noise_var = 0.0;
  const GprFit fit = fit_gpr(X, y, params);

  double max_err = 0.0;
  double max_var = 0.0;
  for (Eigen::Index i = 0; i < 50; ++i) {
    const auto p = fit.predict(X.row(i));
    max_err = std::max(max_err, std::abs(p.mean - y(i)));
    max_var = std::max(max_var, p.variance);
    CHECK(p.variance >= 0.0);
    CHECK(fit.raw_variance(X.row(i)) >= -1e-10);
  }
  CHECK(max_err < 1e-8);
  CHECK(max_var < 1e-8);
}

TEST_CASE("single training point has a closed-form posterior mean") {
  Eigen::MatrixXd X(1, 2);
  X << 0.5, -1.0;
  Eigen::VectorXd y(1);
  y << 3.0;
  GprParams params;
  params.length_scale = 1.3;
  params.signal_var = 1.0;
  params.noise_var = 0.25;
  params.center_target = false;  // zero prior mean, no recentering
  const GprFit fit = fit_gpr(X, y, params);

  Rng rng(17);
  for (int rep = 0; rep < 10; ++rep) {
    Eigen::RowVectorXd q(2);
    q << rng.uniform(-2, 2), rng.uniform(-2, 2);
    const double k = se_kernel(q, X.row(0), params);
    const double expected = k * y(0) / (1.0 + params.noise_var);
    CHECK(fit.predict_mean(q) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("far queries revert to the prior") {
  const Eigen::MatrixXd X = random_points(19, 20, 3);
  Rng rng(20);
  Eigen::VectorXd y(20);
  for (Eigen::Index i = 0; i < 20; ++i) y(i) = rng.uniform(1.0, 2.0);

  GprParams params;
  params.length_scale = 0.7;
  params.signal_var = 2.5;
  params.noise_var = 1e-3;

  SUBCASE("without centering the prior mean is zero") {
    params.center_target = false;
    const GprFit fit = fit_gpr(X, y, params);
    Eigen::RowVectorXd q = Eigen::RowVectorXd::Constant(3, 100.0);
    const auto p = fit.predict(q);
    CHECK(std::abs(p.mean) < 1e-8);
    CHECK(p.variance == doctest::Approx(params.signal_var).epsilon(1e-9));
  }
  SUBCASE("with centering the prior mean is the training mean") {
    params.center_target = true;
    const GprFit fit = fit_gpr(X, y, params);
    Eigen::RowVectorXd q = Eigen::RowVectorXd::Constant(3, 100.0);
    const auto p = fit.predict(q);
    CHECK(p.mean == doctest::Approx(y.mean()).epsilon(1e-9));
    CHECK(p.variance == doctest::Approx(params.signal_var).epsilon(1e-9));
  }
}

TEST_CASE("duplicate rows with zero noise are rescued by jitter") {
  Eigen::MatrixXd X(4, 2);
  X << 1, 1, 1, 1, 2, 2, 3, 3;  // first two rows identical
  Eigen::VectorXd y(4);
  y << 1, 1, 2, 3;
  GprParams params;
  params.noise_var = 0.0;
  const GprFit fit = fit_gpr(X, y, params);
  CHECK(fit.jitter > 0.0);
  CHECK(fit.jitter <= 1e-4);
  // still close to an interpolant away from the duplicate pair
  CHECK(fit.predict(X.row(3)).mean == doctest::Approx(3.0).epsilon(1e-4));
}

TEST_CASE("gpr through the common interface standardizes and centers") {
  Rng rng(23);
  Dataset ds;
  ds.X = random_points(29, 60, 8);
  ds.X = ds.X * 15.0;  // wildly unscaled features
  ds.X.array() += 40.0;
  ds.y.resize(60);
  for (Eigen::Index i = 0; i < 60; ++i)
    ds.y(i) = 5.0 + std::sin(ds.X(i, 0) / 15.0) + 0.1 * rng.normal();
  ds.target_name = "y";

  ModelConfig config;
  config.kind = ModelKind::Gpr;
  config.gpr.length_scale = 1.0;
  config.gpr.noise_var = 1e-4;
  const TrainedModel model = train(config, ds);
  const Eigen::VectorXd pred = model.predict(ds.X);
  CHECK((pred - ds.y).cwiseAbs().maxCoeff() < 0.05);

  const auto with_var = model.predict_with_variance(ds.X.topRows(5));
  for (const auto& p : with_var) CHECK(p.variance >= 0.0);
}

TEST_CASE("variance is unavailable on non-GP models") {
  Dataset ds;
  ds.X = random_points(31, 10, 2);
  ds.y = Eigen::VectorXd::LinSpaced(10, 0, 9);
  ds.target_name = "y";
  ModelConfig config;
  config.kind = ModelKind::Knn;
  config.knn.k = 2;
  const TrainedModel model = train(config, ds);
  CHECK_THROWS(model.predict_with_variance(ds.X));
}

TEST_CASE("kernel parameter validation") {
  Dataset ds;
  ds.X = random_points(37, 10, 2);
  ds.y = Eigen::VectorXd::LinSpaced(10, 0, 9);
  ds.target_name = "y";
  ModelConfig config;
  config.kind = ModelKind::Gpr;
  config.gpr.length_scale = 0.0;
  CHECK_THROWS(train(config, ds));
  config.gpr.length_scale = 1.0;
  config.gpr.noise_var = -1.0;
  CHECK_THROWS(train(config, ds));
}
