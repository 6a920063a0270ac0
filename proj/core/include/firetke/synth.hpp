#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>

#include "firetke/dataset.hpp"

namespace firetke::synth {

enum class DependenceKind { Linear, NonlinearWeakPearson };

std::string_view dependence_name(DependenceKind kind);
DependenceKind dependence_from_name(std::string_view name);

/// Controls for the synthetic sensor-table generator. Features are eight
/// temperature-like columns driven by two latent factors plus a small
/// independent jitter, so they are strongly inter-correlated like real
/// thermocouple stacks. The target is
///   linear:               y0 + c . z            (+ noise)
///   nonlinear-weak-pearson: y0 + s ((u.z)^2 + (v.z)^2)  (+ noise)
/// where z are the standardized features. The quadratic form is even in z,
/// so every feature-target Pearson correlation vanishes in population while
/// the mapping stays an exact, smooth function of the features.
struct SynthSpec {
  int n = 1000;
  double noise_sd = 0.0;
  std::optional<double> noise_frac;  ///< overrides noise_sd as a fraction of sd(y)
  std::uint64_t seed = 1;
  DependenceKind kind = DependenceKind::NonlinearWeakPearson;

  void validate() const;  ///< n >= 10, noise_sd >= 0
};

struct SynthResult {
  Dataset data;
  Eigen::VectorXd y_clean;  ///< noiseless target, for oracle checks
  double noise_sd_used = 0.0;
};

SynthResult generate(const SynthSpec& spec);

/// Encodes a generated dataset as sensor CSVs that replay through the full
/// ingest/turbulence path: constant pre- and post-burn wind so the baseline
/// is exact, and a vertical-wind excursion during the burn whose kinetic
/// energy reproduces the target row by row (target kind `tke`).
struct FixtureLayout {
  double tick = 0.1;
  int preburn_rows = 200;
  int postburn_rows = 50;
  double ambient_wind = 5.0;   ///< m/s on all components outside the burn
  double ambient_temp = 20.0;  ///< degC for pre/post thermo rows
};

struct FixtureInfo {
  std::filesystem::path sonic;
  std::filesystem::path thermo;
  double burn_start = 0.0;
  double burn_end = 0.0;
};

FixtureInfo write_pipeline_fixture(const Dataset& data,
                                   const std::filesystem::path& dir,
                                   const FixtureLayout& layout = {});

}  // namespace firetke::synth
