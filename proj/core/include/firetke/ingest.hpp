#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace firetke::ingest {

/// One sonic anemometer reading: 3-D wind components plus sonic temperature,
/// sampled at 10 Hz.
struct SonicSample {
  double t = 0.0;        ///< seconds, 0.1 s resolution
  double u = 0.0;        ///< east-west wind, m/s
  double v = 0.0;        ///< north-south wind, m/s
  double w = 0.0;        ///< vertical wind, m/s
  double sonic_temp = 0.0;  ///< sonic temperature, degC
};

/// One thermocouple reading: seven temperatures ordered by mount height
/// above the fuel bed.
struct ThermoSample {
  double t = 0.0;
  std::array<double, 7> temps{};  ///< T1..T7, degC
};

enum class BurnPhase { PreBurn, Burn, PostBurn };

std::string_view phase_name(BurnPhase phase);  // "pre" | "burn" | "post"

inline constexpr int kFeatureCount = 8;

/// Feature column labels in canonical order: T1..T7 then sonic_T.
const std::array<std::string_view, kFeatureCount>& feature_names();

/// One merged 10 Hz observation. Feature order is fixed: T1..T7, sonic_T.
/// The phase is meaningful only after segment_phases has run.
struct AlignedFrame {
  double t = 0.0;
  std::array<double, kFeatureCount> features{};
  std::array<double, 3> wind{};  ///< u, v, w
  BurnPhase phase = BurnPhase::PreBurn;
};

template <typename Sample>
struct ParseResult {
  std::vector<Sample> samples;
  std::size_t rejected = 0;  ///< rows dropped for arity/numeric/finite errors
};

/// Parses a sonic CSV (`t,u,v,w,sonic_T`). Malformed rows are dropped and
/// counted; more than 50% dropped rows is treated as a corrupt file.
ParseResult<SonicSample> parse_sonic_csv(const std::filesystem::path& path);

/// Parses a thermocouple CSV (`t,T1,...,T7`) with the same rejection rules.
ParseResult<ThermoSample> parse_thermo_csv(const std::filesystem::path& path);

/// Shifts both streams onto a common relative-seconds timeline by
/// subtracting the earlier of the two first timestamps. Used when the source
/// files carry absolute (epoch) times. Returns the subtracted origin.
double rebase_to_common_start(std::vector<SonicSample>& sonic,
                              std::vector<ThermoSample>& thermo);

struct AlignResult {
  std::vector<AlignedFrame> frames;
  std::size_t sonic_dropped = 0;   ///< sonic samples with no thermo partner
  std::size_t thermo_dropped = 0;  ///< thermo samples never paired
};

/// Pairs each sonic sample with the nearest thermo sample within
/// `tolerance` seconds. Inputs must be sorted by time; output timestamps are
/// strictly increasing. An empty overlap yields an empty result, not an
/// error.
AlignResult align(std::span<const SonicSample> sonic,
                  std::span<const ThermoSample> thermo,
                  double tolerance = 0.05);

/// Labels every frame: t < burn_start is pre-burn, t in the closed interval
/// [burn_start, burn_end] is burn, later is post-burn.
std::vector<AlignedFrame> segment_phases(std::vector<AlignedFrame> frames,
                                         double burn_start, double burn_end);

std::vector<AlignedFrame> frames_in_phase(std::span<const AlignedFrame> frames,
                                          BurnPhase phase);

void write_sonic_csv(const std::filesystem::path& path,
                     std::span<const SonicSample> samples);
void write_thermo_csv(const std::filesystem::path& path,
                      std::span<const ThermoSample> samples);

/// Export schema: `t,T1..T7,sonic_T,u,v,w,phase`. Numeric fields round-trip
/// bit-exactly through read_aligned_csv.
void write_aligned_csv(const std::filesystem::path& path,
                       std::span<const AlignedFrame> frames);
std::vector<AlignedFrame> read_aligned_csv(const std::filesystem::path& path);

}  // namespace firetke::ingest
