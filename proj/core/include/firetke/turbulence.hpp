#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "firetke/ingest.hpp"

namespace firetke::turbulence {

/// Pre-burn mean wind per component, used as the reference for
/// perturbations. n_used is the smallest per-component count of samples
/// that entered a mean; n_truncated counts samples excluded from at least
/// one component by the clip band.
struct BaselineMeans {
  double u_bar = 0.0;
  double v_bar = 0.0;
  double w_bar = 0.0;
  std::size_t n_used = 0;
  std::size_t n_truncated = 0;
};

/// What the +/-clip truncation band applies to when computing baselines.
/// The default clips the wind components themselves; the alternatives drop
/// whole samples whose sonic temperature falls outside the band.
enum class ClipTarget { Wind, SonicTemp, Both };

struct Perturbation {
  double u = 0.0;
  double v = 0.0;
  double w = 0.0;
};

/// Per-timestamp turbulence kinetic energy and its trailing moving average.
/// tke_ma[i] is empty for the first window-1 points.
struct TkeSeries {
  std::vector<double> t;
  std::vector<double> tke;                     ///< m^2/s^2
  std::vector<std::optional<double>> tke_ma;   ///< m^2/s^2
};

/// Mean wind over the pre-burn samples whose clipped quantity lies in
/// [-clip, +clip]. Throws if the input is empty or any component loses all
/// of its samples to the band.
BaselineMeans baseline_means(std::span<const ingest::AlignedFrame> preburn,
                             double clip = 50.0,
                             ClipTarget target = ClipTarget::Wind);

/// Instantaneous wind fluctuations: component minus its baseline mean.
std::vector<Perturbation> perturb(std::span<const ingest::AlignedFrame> frames,
                                  const BaselineMeans& means);

/// Turbulence kinetic energy of one perturbation triple: half the sum of
/// squared components. Non-negative by construction.
inline double tke(double du, double dv, double dw) {
  return 0.5 * (du * du + dv * dv + dw * dw);
}
inline double tke(const Perturbation& p) { return tke(p.u, p.v, p.w); }

/// Trailing moving average: out[i] = mean(series[i-window+1 .. i]) for
/// i >= window-1, empty before that. Each window mean is clamped to the
/// window's [min, max] so rounding never pushes it outside the data range.
std::vector<std::optional<double>> moving_average(std::span<const double> series,
                                                  int window = 10);

/// Full pipeline step: perturbations, per-frame TKE, and its moving average
/// on the frames' timeline.
TkeSeries tke_series(std::span<const ingest::AlignedFrame> frames,
                     const BaselineMeans& means, int window = 10);

/// CSV export `t,tke,tke_ma`; undefined moving-average cells are left empty.
void write_tke_csv(const std::filesystem::path& path, const TkeSeries& series);

}  // namespace firetke::turbulence
