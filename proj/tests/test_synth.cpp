#include <doctest.h>

#include <cmath>

#include "firetke/evaluate.hpp"
#include "firetke/stats.hpp"
#include "firetke/synth.hpp"
#include "test_helpers.hpp"

using namespace firetke;
using namespace firetke::synth;

TEST_CASE("linear kind has a strong documented first-feature correlation") {
  SynthSpec spec;
  spec.n = 2000;
  spec.seed = 21;
  spec.kind = DependenceKind::Linear;
  spec.noise_sd = 0.0;
  const auto result = generate(spec);
  std::vector<double> f1(static_cast<std::size_t>(spec.n));
  std::vector<double> y(static_cast<std::size_t>(spec.n));
  for (int i = 0; i < spec.n; ++i) {
    f1[static_cast<std::size_t>(i)] = result.data.X(i, 0);
    y[static_cast<std::size_t>(i)] = result.data.y(i);
  }
  CHECK(stats::pearson(f1, y) > 0.5);
}

TEST_CASE("nonlinear kind has weak per-feature correlations at n=5000") {
  SynthSpec spec;
  spec.n = 5000;
  spec.seed = 23;
  spec.kind = DependenceKind::NonlinearWeakPearson;
  spec.noise_sd = 0.0;
  const auto result = generate(spec);
  for (int f = 0; f < 8; ++f) {
    std::vector<double> col(static_cast<std::size_t>(spec.n));
    std::vector<double> y(static_cast<std::size_t>(spec.n));
    for (int i = 0; i < spec.n; ++i) {
      col[static_cast<std::size_t>(i)] = result.data.X(i, f);
      y[static_cast<std::size_t>(i)] = result.data.y(i);
    }
    CHECK(std::abs(stats::pearson(col, y)) < 0.1);
  }
}

TEST_CASE("same seed gives bit-identical datasets") {
  SynthSpec spec;
  spec.n = 500;
  spec.seed = 29;
  spec.noise_sd = 0.5;
  const auto a = generate(spec);
  const auto b = generate(spec);
  CHECK(a.data.X == b.data.X);
  CHECK(a.data.y == b.data.y);

  // features are independent of the noise setting
  SynthSpec noisier = spec;
  noisier.noise_sd = 2.0;
  const auto c = generate(noisier);
  CHECK(c.data.X == a.data.X);
  CHECK(c.data.y != a.data.y);
}

TEST_CASE("generated data is finite and non-negative") {
  SynthSpec spec;
  spec.n = 1000;
  spec.seed = 31;
  spec.noise_sd = 3.0;
  const auto result = generate(spec);
  CHECK(result.data.X.allFinite());
  CHECK(result.data.y.allFinite());
  CHECK((result.data.y.array() >= 0.0).all());
}

TEST_CASE("noise_frac scales noise from the clean target spread") {
  SynthSpec spec;
  spec.n = 4000;
  spec.seed = 37;
  spec.noise_frac = 0.05;
  const auto result = generate(spec);
  const double mean = result.y_clean.mean();
  const double sd = std::sqrt((result.y_clean.array() - mean).square().sum() /
                              static_cast<double>(spec.n - 1));
  CHECK(result.noise_sd_used == doctest::Approx(0.05 * sd).epsilon(1e-12));
  // realized noise is near the requested level
  const Eigen::VectorXd noise = result.data.y - result.y_clean;
  const double realized = std::sqrt(noise.squaredNorm() / noise.size());
  CHECK(realized == doctest::Approx(result.noise_sd_used).epsilon(0.1));
}

TEST_CASE("noiseless data is exactly learnable by a flexible model") {
  SynthSpec spec;
  spec.n = 400;
  spec.seed = 41;
  spec.noise_sd = 0.0;
  const auto ds = generate(spec).data;
  models::ModelConfig config;
  config.kind = models::ModelKind::Knn;
  config.knn.k = 1;
  const auto model = models::train(config, ds);
  const Eigen::VectorXd pred = model.predict(ds.X);
  std::vector<double> yt(ds.y.data(), ds.y.data() + ds.y.size());
  std::vector<double> yp(pred.data(), pred.data() + pred.size());
  CHECK(stats::r_squared(yt, yp) > 0.999);

  models::ModelConfig tree;
  tree.kind = models::ModelKind::RandomForest;
  tree.forest.n_trees = 1;
  tree.forest.bootstrap = false;
  const auto deep = models::train(tree, ds);
  const Eigen::VectorXd tp = deep.predict(ds.X);
  std::vector<double> tpv(tp.data(), tp.data() + tp.size());
  CHECK(stats::r_squared(yt, tpv) > 0.999);
}

TEST_CASE("pipeline fixture replays through ingest and turbulence") {
  SynthSpec spec;
  spec.n = 200;
  spec.seed = 43;
  spec.noise_sd = 0.2;
  const auto ds = generate(spec).data;

  test::TempDir tmp("fixture");
  const FixtureInfo info = write_pipeline_fixture(ds, tmp.path());

  const auto sonic = ingest::parse_sonic_csv(info.sonic);
  const auto thermo = ingest::parse_thermo_csv(info.thermo);
  CHECK(sonic.rejected == 0);
  CHECK(thermo.rejected == 0);

  const auto aligned = ingest::align(sonic.samples, thermo.samples, 0.05);
  CHECK(aligned.frames.size() == sonic.samples.size());
  const auto frames =
      ingest::segment_phases(aligned.frames, info.burn_start, info.burn_end);
  const auto preburn = ingest::frames_in_phase(frames, ingest::BurnPhase::PreBurn);
  const auto means = turbulence::baseline_means(preburn, 50.0);
  CHECK(means.u_bar == 5.0);
  CHECK(means.w_bar == 5.0);
  CHECK(means.n_truncated == 0);

  const auto series = turbulence::tke_series(frames, means, 10);
  const auto rebuilt =
      build_dataset(frames, series, TargetKind::Tke, ingest::BurnPhase::Burn, "synth");
  REQUIRE(rebuilt.rows() == ds.rows());
  // kinetic-energy encoding reproduces the target to rounding error
  CHECK((rebuilt.y - ds.y).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(rebuilt.X == ds.X);
}
