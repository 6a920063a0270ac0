#include "firetke/synth.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "firetke/rng.hpp"

namespace firetke::synth {

namespace {

// Per-channel location/scale giving plausible burn-period magnitudes.
constexpr double kMu[8] = {24.0, 26.0, 28.0, 31.0, 34.0, 38.0, 45.0, 21.0};
constexpr double kSigma[8] = {6.0, 6.0, 7.0, 7.0, 8.0, 8.0, 9.0, 3.0};

// Factor loadings: angles spread over a quarter turn, so neighboring
// channels correlate strongly and distant ones more weakly.
constexpr double kAngle[8] = {0.00, 0.18, 0.36, 0.55, 0.75, 0.95, 1.15, 0.40};
constexpr double kJitterSd = 0.05;

// Linear-target coefficients on the standardized features.
constexpr double kLinearCoef[8] = {3.0, 1.0, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5};

constexpr double kOffset = 1.0;
constexpr double kQuadScale = 2.0;

struct Directions {
  Eigen::VectorXd u;
  Eigen::VectorXd v;
};

// Two fixed unit directions in standardized-feature space: the first factor
// axis and the orthogonalized second axis.
Directions quadratic_directions() {
  Eigen::VectorXd a(8), b(8);
  for (int j = 0; j < 8; ++j) {
    a(j) = std::cos(kAngle[j]);
    b(j) = std::sin(kAngle[j]);
  }
  Directions d;
  d.u = a / a.norm();
  Eigen::VectorXd b_perp = b - d.u.dot(b) * d.u;
  d.v = b_perp / b_perp.norm();
  return d;
}

}  // namespace

std::string_view dependence_name(DependenceKind kind) {
  return kind == DependenceKind::Linear ? "linear" : "nonlinear-weak-pearson";
}

DependenceKind dependence_from_name(std::string_view name) {
  if (name == "linear") return DependenceKind::Linear;
  if (name == "nonlinear-weak-pearson") return DependenceKind::NonlinearWeakPearson;
  throw std::invalid_argument(fmt::format("unknown dependence kind \"{}\"", name));
}

void SynthSpec::validate() const {
  if (n < 10) throw std::invalid_argument("SynthSpec: n must be >= 10");
  if (noise_sd < 0.0) throw std::invalid_argument("SynthSpec: noise_sd must be >= 0");
  if (noise_frac && *noise_frac < 0.0)
    throw std::invalid_argument("SynthSpec: noise_frac must be >= 0");
}

SynthResult generate(const SynthSpec& spec) {
  spec.validate();

  // independent streams so the same seed yields the same features
  // regardless of the noise setting
  Rng feature_rng(derive_seed(spec.seed, 0));
  Rng noise_rng(derive_seed(spec.seed, 1));

  const Eigen::Index n = spec.n;
  Eigen::MatrixXd Z(n, 8);  // standardized features
  for (Eigen::Index i = 0; i < n; ++i) {
    const double f1 = feature_rng.normal();
    const double f2 = feature_rng.normal();
    for (int j = 0; j < 8; ++j) {
      const double jitter = feature_rng.normal() * kJitterSd;
      Z(i, j) = std::cos(kAngle[j]) * f1 + std::sin(kAngle[j]) * f2 + jitter;
    }
  }

  SynthResult result;
  result.y_clean.resize(n);
  if (spec.kind == DependenceKind::Linear) {
    const Eigen::Map<const Eigen::VectorXd> coef(kLinearCoef, 8);
    result.y_clean = (Z * coef).array() + 10.0;  // keep the level positive
  } else {
    const Directions dirs = quadratic_directions();
    const Eigen::VectorXd pu = Z * dirs.u;
    const Eigen::VectorXd pv = Z * dirs.v;
    result.y_clean =
        kOffset + kQuadScale * (pu.array().square() + pv.array().square());
  }

  double noise_sd = spec.noise_sd;
  if (spec.noise_frac) {
    const double mean = result.y_clean.mean();
    const double sd = std::sqrt((result.y_clean.array() - mean).square().sum() /
                                static_cast<double>(n - 1));
    noise_sd = *spec.noise_frac * sd;
  }
  result.noise_sd_used = noise_sd;

  Dataset& ds = result.data;
  ds.X.resize(n, 8);
  for (Eigen::Index i = 0; i < n; ++i)
    for (int j = 0; j < 8; ++j) ds.X(i, j) = kMu[j] + kSigma[j] * Z(i, j);
  ds.y = result.y_clean;
  if (noise_sd > 0.0)
    for (Eigen::Index i = 0; i < n; ++i)
      ds.y(i) += noise_rng.normal(0.0, noise_sd);
  ds.y = ds.y.cwiseMax(0.0);  // the target is an energy

  for (const auto name : ingest::feature_names()) ds.feature_names.emplace_back(name);
  ds.target_name = "tke";
  ds.label = fmt::format("synth-{}-n{}", dependence_name(spec.kind), spec.n);
  ds.validate();
  return result;
}

FixtureInfo write_pipeline_fixture(const Dataset& data,
                                   const std::filesystem::path& dir,
                                   const FixtureLayout& layout) {
  if (data.rows() < 1)
    throw std::invalid_argument("write_pipeline_fixture: empty dataset");
  if ((data.y.array() < 0.0).any())
    throw std::invalid_argument(
        "write_pipeline_fixture: target must be non-negative to encode as "
        "kinetic energy");
  std::filesystem::create_directories(dir);

  const int n = static_cast<int>(data.rows());
  std::vector<ingest::SonicSample> sonic;
  std::vector<ingest::ThermoSample> thermo;
  sonic.reserve(static_cast<std::size_t>(layout.preburn_rows + n + layout.postburn_rows));
  thermo.reserve(sonic.capacity());

  const double w0 = layout.ambient_wind;
  auto ambient_thermo = [&](double t) {
    ingest::ThermoSample s;
    s.t = t;
    for (auto& temp : s.temps) temp = layout.ambient_temp;
    return s;
  };

  int row = 0;
  for (int i = 0; i < layout.preburn_rows; ++i, ++row) {
    const double t = static_cast<double>(row) * layout.tick;
    sonic.push_back({t, w0, w0, w0, layout.ambient_temp});
    thermo.push_back(ambient_thermo(t));
  }
  const double burn_start = static_cast<double>(row) * layout.tick;
  for (int i = 0; i < n; ++i, ++row) {
    const double t = static_cast<double>(row) * layout.tick;
    // vertical gust carrying exactly the row's kinetic energy
    const double w = w0 + std::sqrt(2.0 * data.y(i));
    sonic.push_back({t, w0, w0, w, data.X(i, 7)});
    ingest::ThermoSample s;
    s.t = t;
    for (int j = 0; j < 7; ++j) s.temps[static_cast<std::size_t>(j)] = data.X(i, j);
    thermo.push_back(s);
  }
  const double burn_end = static_cast<double>(row - 1) * layout.tick;
  for (int i = 0; i < layout.postburn_rows; ++i, ++row) {
    const double t = static_cast<double>(row) * layout.tick;
    sonic.push_back({t, w0, w0, w0, layout.ambient_temp});
    thermo.push_back(ambient_thermo(t));
  }

  FixtureInfo info;
  info.sonic = dir / "sonic.csv";
  info.thermo = dir / "thermo.csv";
  info.burn_start = burn_start;
  info.burn_end = burn_end;
  ingest::write_sonic_csv(info.sonic, sonic);
  ingest::write_thermo_csv(info.thermo, thermo);
  return info;
}

}  // namespace firetke::synth
