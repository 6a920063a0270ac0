#include "firetke/turbulence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

#include "firetke/csv.hpp"

namespace firetke::turbulence {

BaselineMeans baseline_means(std::span<const ingest::AlignedFrame> preburn,
                             double clip, ClipTarget target) {
  if (preburn.empty())
    throw std::invalid_argument("baseline_means: no pre-burn samples");
  if (!(clip > 0.0))
    throw std::invalid_argument("baseline_means: clip must be > 0");

  const bool clip_wind = target == ClipTarget::Wind || target == ClipTarget::Both;
  const bool clip_sonic = target == ClipTarget::SonicTemp || target == ClipTarget::Both;

  double sums[3] = {0.0, 0.0, 0.0};
  std::size_t counts[3] = {0, 0, 0};
  std::size_t fully_used = 0;
  for (const auto& frame : preburn) {
    if (clip_sonic && std::abs(frame.features[7]) > clip) continue;
    bool all_in_band = true;
    for (int c = 0; c < 3; ++c) {
      const double value = frame.wind[static_cast<std::size_t>(c)];
      if (clip_wind && std::abs(value) > clip) {
        all_in_band = false;
        continue;
      }
      sums[c] += value;
      ++counts[c];
    }
    if (all_in_band) ++fully_used;
  }

  static constexpr const char* kComponent[3] = {"u", "v", "w"};
  for (int c = 0; c < 3; ++c)
    if (counts[c] == 0)
      throw std::runtime_error(fmt::format(
          "baseline_means: every pre-burn sample truncated for component {}",
          kComponent[c]));

  BaselineMeans means;
  means.u_bar = sums[0] / static_cast<double>(counts[0]);
  means.v_bar = sums[1] / static_cast<double>(counts[1]);
  means.w_bar = sums[2] / static_cast<double>(counts[2]);
  means.n_used = std::min({counts[0], counts[1], counts[2]});
  means.n_truncated = preburn.size() - fully_used;
  if (means.n_used == 0)
    throw std::runtime_error("baseline_means: no usable pre-burn samples");
  if (!std::isfinite(means.u_bar) || !std::isfinite(means.v_bar) ||
      !std::isfinite(means.w_bar))
    throw std::runtime_error("baseline_means: non-finite mean");
  return means;
}

std::vector<Perturbation> perturb(std::span<const ingest::AlignedFrame> frames,
                                  const BaselineMeans& means) {
  if (!std::isfinite(means.u_bar) || !std::isfinite(means.v_bar) ||
      !std::isfinite(means.w_bar))
    throw std::invalid_argument("perturb: baseline means must be finite");
  std::vector<Perturbation> out;
  out.reserve(frames.size());
  for (const auto& frame : frames)
    out.push_back({frame.wind[0] - means.u_bar, frame.wind[1] - means.v_bar,
                   frame.wind[2] - means.w_bar});
  return out;
}

std::vector<std::optional<double>> moving_average(std::span<const double> series,
                                                  int window) {
  if (window < 1) throw std::invalid_argument("moving_average: window must be >= 1");
  if (series.size() < static_cast<std::size_t>(window))
    throw std::invalid_argument(
        fmt::format("moving_average: series length {} shorter than window {}",
                    series.size(), window));
  const std::size_t w = static_cast<std::size_t>(window);
  std::vector<std::optional<double>> out(series.size());
  for (std::size_t i = w - 1; i < series.size(); ++i) {
    double sum = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t j = i + 1 - w; j <= i; ++j) {
      sum += series[j];
      lo = std::min(lo, series[j]);
      hi = std::max(hi, series[j]);
    }
    out[i] = std::clamp(sum / static_cast<double>(w), lo, hi);
  }
  return out;
}

TkeSeries tke_series(std::span<const ingest::AlignedFrame> frames,
                     const BaselineMeans& means, int window) {
  const auto perturbations = perturb(frames, means);
  TkeSeries series;
  series.t.reserve(frames.size());
  series.tke.reserve(frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    series.t.push_back(frames[i].t);
    series.tke.push_back(tke(perturbations[i]));
  }
  series.tke_ma = moving_average(series.tke, window);
  return series;
}

void write_tke_csv(const std::filesystem::path& path, const TkeSeries& series) {
  std::string out = "t,tke,tke_ma\n";
  for (std::size_t i = 0; i < series.t.size(); ++i) {
    out += csv::format_double(series.t[i]);
    out += ',';
    out += csv::format_double(series.tke[i]);
    out += ',';
    if (series.tke_ma[i]) out += csv::format_double(*series.tke_ma[i]);
    out += '\n';
  }
  csv::atomic_write(path, out);
}

}  // namespace firetke::turbulence
