#include "firetke/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

#include "firetke/csv.hpp"

namespace firetke::ingest {

namespace {

constexpr std::string_view kSonicHeader = "t,u,v,w,sonic_T";
constexpr std::string_view kThermoHeader = "t,T1,T2,T3,T4,T5,T6,T7";
constexpr std::string_view kAlignedHeader =
    "t,T1,T2,T3,T4,T5,T6,T7,sonic_T,u,v,w,phase";

// Parses all fields of a row as finite doubles; the first must also be a
// non-negative timestamp. Returns false to reject the row.
bool parse_row(const std::vector<std::string_view>& fields,
               std::size_t expected, std::vector<double>& out) {
  if (fields.size() != expected) return false;
  out.resize(expected);
  for (std::size_t i = 0; i < expected; ++i) {
    if (!csv::parse_double(fields[i], out[i])) return false;
    if (!std::isfinite(out[i])) return false;
  }
  if (out[0] < 0.0) return false;
  return true;
}

struct LineReader {
  std::string_view text;
  std::size_t pos = 0;
  bool next(std::string_view& line) {
    if (pos >= text.size()) return false;
    const std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      line = text.substr(pos);
      pos = text.size();
    } else {
      line = text.substr(pos, nl - pos);
      pos = nl + 1;
    }
    return true;
  }
};

template <typename Sample, typename RowFn>
ParseResult<Sample> parse_csv(const std::filesystem::path& path,
                              std::string_view expected_header,
                              std::size_t n_fields, RowFn make_sample) {
  if (!std::filesystem::exists(path))
    throw std::runtime_error("input file not found: " + path.string());
  const std::string content = csv::read_file(path);
  LineReader reader{content};

  std::string_view header;
  if (!reader.next(header))
    throw std::runtime_error("empty file (missing header): " + path.string());
  if (!header.empty() && header.back() == '\r') header.remove_suffix(1);
  if (header != expected_header)
    throw std::runtime_error(
        fmt::format("unexpected header in {}: got \"{}\", want \"{}\"",
                    path.string(), header, expected_header));

  ParseResult<Sample> result;
  std::vector<double> row;
  std::string_view line;
  while (reader.next(line)) {
    if (line.empty() || line == "\r") continue;  // ignore blank lines
    if (!parse_row(csv::split_fields(line), n_fields, row)) {
      ++result.rejected;
      continue;
    }
    result.samples.push_back(make_sample(row));
  }

  const std::size_t total = result.samples.size() + result.rejected;
  if (total > 0 && result.rejected * 2 > total)
    throw std::runtime_error(
        fmt::format("{}: {} of {} rows malformed, refusing to continue",
                    path.string(), result.rejected, total));
  return result;
}

}  // namespace

std::string_view phase_name(BurnPhase phase) {
  switch (phase) {
    case BurnPhase::PreBurn: return "pre";
    case BurnPhase::Burn: return "burn";
    case BurnPhase::PostBurn: return "post";
  }
  return "pre";
}

const std::array<std::string_view, kFeatureCount>& feature_names() {
  static const std::array<std::string_view, kFeatureCount> names = {
      "T1", "T2", "T3", "T4", "T5", "T6", "T7", "sonic_T"};
  return names;
}

ParseResult<SonicSample> parse_sonic_csv(const std::filesystem::path& path) {
  return parse_csv<SonicSample>(
      path, kSonicHeader, 5, [](const std::vector<double>& row) {
        return SonicSample{row[0], row[1], row[2], row[3], row[4]};
      });
}

ParseResult<ThermoSample> parse_thermo_csv(const std::filesystem::path& path) {
  return parse_csv<ThermoSample>(
      path, kThermoHeader, 8, [](const std::vector<double>& row) {
        ThermoSample s;
        s.t = row[0];
        for (int i = 0; i < 7; ++i) s.temps[static_cast<std::size_t>(i)] = row[static_cast<std::size_t>(i) + 1];
        return s;
      });
}

double rebase_to_common_start(std::vector<SonicSample>& sonic,
                              std::vector<ThermoSample>& thermo) {
  if (sonic.empty() && thermo.empty()) return 0.0;
  double origin = std::numeric_limits<double>::infinity();
  if (!sonic.empty()) origin = std::min(origin, sonic.front().t);
  if (!thermo.empty()) origin = std::min(origin, thermo.front().t);
  for (auto& s : sonic) s.t -= origin;
  for (auto& s : thermo) s.t -= origin;
  return origin;
}

AlignResult align(std::span<const SonicSample> sonic,
                  std::span<const ThermoSample> thermo, double tolerance) {
  if (tolerance < 0.0)
    throw std::invalid_argument("align: tolerance must be >= 0");
  for (std::size_t i = 1; i < sonic.size(); ++i)
    if (sonic[i].t < sonic[i - 1].t)
      throw std::invalid_argument("align: sonic stream is not sorted by time");
  for (std::size_t i = 1; i < thermo.size(); ++i)
    if (thermo[i].t < thermo[i - 1].t)
      throw std::invalid_argument("align: thermo stream is not sorted by time");

  AlignResult result;
  std::vector<bool> thermo_used(thermo.size(), false);
  std::size_t j = 0;
  double last_t = -std::numeric_limits<double>::infinity();
  for (const auto& s : sonic) {
    // advance to the nearest thermo sample for this timestamp
    while (j + 1 < thermo.size() &&
           std::abs(thermo[j + 1].t - s.t) <= std::abs(thermo[j].t - s.t))
      ++j;
    if (thermo.empty() || std::abs(thermo[j].t - s.t) > tolerance) {
      ++result.sonic_dropped;
      continue;
    }
    if (s.t <= last_t) {  // duplicate sonic timestamp
      ++result.sonic_dropped;
      continue;
    }
    last_t = s.t;
    thermo_used[j] = true;
    AlignedFrame frame;
    frame.t = s.t;
    for (std::size_t k = 0; k < 7; ++k) frame.features[k] = thermo[j].temps[k];
    frame.features[7] = s.sonic_temp;
    frame.wind = {s.u, s.v, s.w};
    result.frames.push_back(frame);
  }
  for (std::size_t k = 0; k < thermo.size(); ++k)
    if (!thermo_used[k]) ++result.thermo_dropped;
  return result;
}

std::vector<AlignedFrame> segment_phases(std::vector<AlignedFrame> frames,
                                         double burn_start, double burn_end) {
  if (!(burn_start < burn_end))
    throw std::invalid_argument("segment_phases: burn_start must be < burn_end");
  for (auto& frame : frames) {
    if (frame.t < burn_start)
      frame.phase = BurnPhase::PreBurn;
    else if (frame.t <= burn_end)
      frame.phase = BurnPhase::Burn;
    else
      frame.phase = BurnPhase::PostBurn;
  }
  return frames;
}

std::vector<AlignedFrame> frames_in_phase(std::span<const AlignedFrame> frames,
                                          BurnPhase phase) {
  std::vector<AlignedFrame> out;
  for (const auto& frame : frames)
    if (frame.phase == phase) out.push_back(frame);
  return out;
}

void write_sonic_csv(const std::filesystem::path& path,
                     std::span<const SonicSample> samples) {
  std::string out(kSonicHeader);
  out += '\n';
  for (const auto& s : samples) {
    out += csv::format_double(s.t);
    out += ',';
    out += csv::format_double(s.u);
    out += ',';
    out += csv::format_double(s.v);
    out += ',';
    out += csv::format_double(s.w);
    out += ',';
    out += csv::format_double(s.sonic_temp);
    out += '\n';
  }
  csv::atomic_write(path, out);
}

void write_thermo_csv(const std::filesystem::path& path,
                      std::span<const ThermoSample> samples) {
  std::string out(kThermoHeader);
  out += '\n';
  for (const auto& s : samples) {
    out += csv::format_double(s.t);
    for (double temp : s.temps) {
      out += ',';
      out += csv::format_double(temp);
    }
    out += '\n';
  }
  csv::atomic_write(path, out);
}

void write_aligned_csv(const std::filesystem::path& path,
                       std::span<const AlignedFrame> frames) {
  std::string out(kAlignedHeader);
  out += '\n';
  for (const auto& frame : frames) {
    out += csv::format_double(frame.t);
    for (double f : frame.features) {
      out += ',';
      out += csv::format_double(f);
    }
    for (double w : frame.wind) {
      out += ',';
      out += csv::format_double(w);
    }
    out += ',';
    out += phase_name(frame.phase);
    out += '\n';
  }
  csv::atomic_write(path, out);
}

std::vector<AlignedFrame> read_aligned_csv(const std::filesystem::path& path) {
  const std::string content = csv::read_file(path);
  LineReader reader{content};
  std::string_view header;
  if (!reader.next(header))
    throw std::runtime_error("empty file (missing header): " + path.string());
  if (!header.empty() && header.back() == '\r') header.remove_suffix(1);
  if (header != kAlignedHeader)
    throw std::runtime_error("unexpected aligned-CSV header in " + path.string());

  std::vector<AlignedFrame> frames;
  std::string_view line;
  std::size_t line_no = 1;
  while (reader.next(line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = csv::split_fields(line);
    if (fields.size() != 13)
      throw std::runtime_error(
          fmt::format("{}:{}: expected 13 fields", path.string(), line_no));
    AlignedFrame frame;
    std::array<double, 12> nums{};
    for (std::size_t i = 0; i < 12; ++i)
      if (!csv::parse_double(fields[i], nums[i]) || !std::isfinite(nums[i]))
        throw std::runtime_error(
            fmt::format("{}:{}: bad numeric field", path.string(), line_no));
    frame.t = nums[0];
    for (std::size_t i = 0; i < 8; ++i) frame.features[i] = nums[i + 1];
    for (std::size_t i = 0; i < 3; ++i) frame.wind[i] = nums[i + 9];
    const std::string_view phase = fields[12];
    if (phase == "pre")
      frame.phase = BurnPhase::PreBurn;
    else if (phase == "burn")
      frame.phase = BurnPhase::Burn;
    else if (phase == "post")
      frame.phase = BurnPhase::PostBurn;
    else
      throw std::runtime_error(
          fmt::format("{}:{}: unknown phase \"{}\"", path.string(), line_no, phase));
    frames.push_back(frame);
  }
  return frames;
}

}  // namespace firetke::ingest
