#include <doctest.h>

#include <cmath>

#include "firetke/models/model.hpp"
#include "test_helpers.hpp"

using namespace firetke;
using namespace firetke::models;

namespace {

Dataset random_dataset(std::uint64_t seed, Eigen::Index n) {
  Rng rng(seed);
  Dataset ds;
  ds.X.resize(n, 8);
  ds.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < 8; ++j) ds.X(i, j) = rng.uniform(-5, 5);
    ds.y(i) = ds.X(i, 0) - 2.0 * ds.X(i, 3) + std::cos(ds.X(i, 5)) +
              0.05 * rng.normal();
  }
  ds.target_name = "y";
  return ds;
}

}  // namespace

TEST_CASE("single full-depth stage drives training residuals to zero") {
  const Dataset ds = random_dataset(81, 50);  // distinct rows, pure leaves reachable
  ModelConfig config;
  config.kind = ModelKind::GradientBoost;
  config.boost.stages = 1;
  config.boost.shrinkage = 1.0;
  config.boost.max_depth = -1;
  const TrainedModel model = train(config, ds);
  const Eigen::VectorXd pred = model.predict(ds.X);
  CHECK((pred - ds.y).cwiseAbs().maxCoeff() < 1e-12);
  REQUIRE(model.loss_trace().size() == 1);
  CHECK(model.loss_trace()[0] < 1e-24);
}

TEST_CASE("zero shrinkage degenerates to the target mean") {
  const Dataset ds = random_dataset(83, 40);
  ModelConfig config;
  config.kind = ModelKind::GradientBoost;
  config.boost.stages = 5;
  config.boost.shrinkage = 0.0;
  const TrainedModel model = train(config, ds);
  const Eigen::VectorXd pred = model.predict(ds.X);
  for (Eigen::Index i = 0; i < pred.size(); ++i) CHECK(pred(i) == ds.y.mean());
}

TEST_CASE("training MSE trace is non-increasing over 200 stages") {
  const Dataset ds = random_dataset(87, 300);
  ModelConfig config;
  config.kind = ModelKind::GradientBoost;
  config.boost.stages = 200;
  config.boost.shrinkage = 0.1;
  config.boost.max_depth = 3;
  const TrainedModel model = train(config, ds);
  const auto& trace = model.loss_trace();
  REQUIRE(trace.size() == 200);
  for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] <= trace[i - 1]);
  CHECK(trace.back() <= trace.front());
}

TEST_CASE("regularized boosting with zero penalties matches plain boosting") {
  const Dataset ds = random_dataset(91, 200);
  ModelConfig gb;
  gb.kind = ModelKind::GradientBoost;
  gb.boost.stages = 60;
  gb.boost.shrinkage = 0.1;
  gb.boost.max_depth = 4;
  ModelConfig xgb = gb;
  xgb.kind = ModelKind::XgBoost;
  xgb.boost.gamma = 0.0;
  xgb.boost.leaf_l2 = 0.0;

  const TrainedModel a = train(gb, ds);
  const TrainedModel b = train(xgb, ds);
  const Dataset queries = random_dataset(93, 64);
  const Eigen::VectorXd pa = a.predict(queries.X);
  const Eigen::VectorXd pb = b.predict(queries.X);
  CHECK((pa - pb).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("huge leaf penalty collapses to the base prediction") {
  const Dataset ds = random_dataset(95, 60);
  ModelConfig config;
  config.kind = ModelKind::XgBoost;
  config.boost.stages = 10;
  config.boost.shrinkage = 0.5;
  config.boost.leaf_l2 = 1e12;
  const TrainedModel model = train(config, ds);
  const Eigen::VectorXd pred = model.predict(ds.X);
  for (Eigen::Index i = 0; i < pred.size(); ++i)
    CHECK(pred(i) == doctest::Approx(ds.y.mean()).epsilon(1e-9));
}

TEST_CASE("regularized leaf weight follows G/(n+alpha)") {
  // residuals {2, 4} in a single leaf with alpha=1 give weight 6/3 = 2
  Eigen::MatrixXd X(2, 1);
  X << 0, 1;
  Eigen::VectorXd r(2);
  r << 2, 4;
  TreeGrowth growth;
  growth.max_depth = 0;
  growth.leaf_l2 = 1.0;
  const RegressionTree tree = fit_tree(X, r, growth);
  REQUIRE(tree.nodes.size() == 1);
  CHECK(tree.nodes[0].value == 2.0);
}

TEST_CASE("split penalty gamma prunes marginal splits") {
  const std::vector<double> xv = {0, 1, 2, 3};
  Eigen::MatrixXd X(4, 1);
  X << 0, 1, 2, 3;
  Eigen::VectorXd y(4);
  y << 0, 0, 10, 10;
  // raw criterion improvement of the best split is 100, so the kept gain is 50
  TreeGrowth loose;
  loose.max_depth = 1;
  loose.split_penalty = 49.0;
  CHECK(fit_tree(X, y, loose).nodes.size() == 3);
  TreeGrowth tight = loose;
  tight.split_penalty = 51.0;
  CHECK(fit_tree(X, y, tight).nodes.size() == 1);
}

TEST_CASE("boosting predictions on generic data stay in the target range") {
  const Dataset ds = random_dataset(97, 250);
  ModelConfig config;
  config.kind = ModelKind::GradientBoost;
  config.boost.stages = 100;
  config.boost.shrinkage = 0.1;
  config.boost.max_depth = 3;
  const TrainedModel model = train(config, ds);
  const Dataset queries = random_dataset(99, 80);
  const Eigen::VectorXd pred = model.predict(queries.X);
  for (Eigen::Index i = 0; i < pred.size(); ++i) {
    CHECK(pred(i) >= ds.y.minCoeff());
    CHECK(pred(i) <= ds.y.maxCoeff());
  }
}

TEST_CASE("boosting parameter validation") {
  const Dataset ds = random_dataset(101, 20);
  ModelConfig config;
  config.kind = ModelKind::GradientBoost;
  config.boost.stages = 0;
  CHECK_THROWS(train(config, ds));
  config.boost.stages = 1;
  config.boost.shrinkage = 1.5;
  CHECK_THROWS(train(config, ds));
  config.boost.shrinkage = 0.1;
  config.boost.gamma = -1.0;
  config.kind = ModelKind::XgBoost;
  CHECK_THROWS(train(config, ds));
}
