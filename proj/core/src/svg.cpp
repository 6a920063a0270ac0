#include "firetke/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <fmt/format.h>

#include "firetke/csv.hpp"

namespace firetke::svg {

namespace {

constexpr double kWidth = 860.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 700.0;   // legend lives right of this
constexpr double kTop = 44.0;
constexpr double kBottom = 430.0;

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string num(double v) { return fmt::format("{:.2f}", v); }
std::string tick_label(double v) { return fmt::format("{:.4g}", v); }

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finalize() {
    if (lo > hi) {
      lo = 0.0;
      hi = 1.0;
    }
    if (lo == hi) {
      lo -= 1.0;
      hi += 1.0;
    }
  }
};

std::string header(const std::string& title) {
  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" "
      "viewBox=\"0 0 {} {}\">\n",
      kWidth, kHeight, kWidth, kHeight);
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += fmt::format(
      "<text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" "
      "text-anchor=\"middle\">{}</text>\n",
      num((kLeft + kRight) / 2.0), escape(title));
  return out;
}

void append_axes(std::string& out, const Range& xr, const Range& yr,
                 const std::string& x_label, const std::string& y_label) {
  out += fmt::format(
      "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" "
      "stroke=\"#333\"/>\n",
      num(kLeft), num(kTop), num(kRight - kLeft), num(kBottom - kTop));
  constexpr int kTicks = 5;
  for (int i = 0; i <= kTicks; ++i) {
    const double f = static_cast<double>(i) / kTicks;
    const double px = kLeft + f * (kRight - kLeft);
    const double py = kBottom - f * (kBottom - kTop);
    const double xv = xr.lo + f * (xr.hi - xr.lo);
    const double yv = yr.lo + f * (yr.hi - yr.lo);
    out += fmt::format(
        "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"#ccc\" "
        "stroke-dasharray=\"3,3\"/>\n",
        num(px), num(kTop), num(kBottom));
    out += fmt::format(
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" "
        "text-anchor=\"middle\">{}</text>\n",
        num(px), num(kBottom + 16.0), tick_label(xv));
    out += fmt::format(
        "<line x1=\"{0}\" y1=\"{2}\" x2=\"{1}\" y2=\"{2}\" stroke=\"#ccc\" "
        "stroke-dasharray=\"3,3\"/>\n",
        num(kLeft), num(kRight), num(py));
    out += fmt::format(
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" "
        "text-anchor=\"end\">{}</text>\n",
        num(kLeft - 6.0), num(py + 4.0), tick_label(yv));
  }
  out += fmt::format(
      "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\" "
      "text-anchor=\"middle\">{}</text>\n",
      num((kLeft + kRight) / 2.0), num(kHeight - 8.0), escape(x_label));
  out += fmt::format(
      "<text x=\"16\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\" "
      "text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">{}</text>\n",
      num((kTop + kBottom) / 2.0), num((kTop + kBottom) / 2.0), escape(y_label));
}

}  // namespace

void write_line_chart(const std::filesystem::path& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<Series>& series) {
  Range xr, yr;
  for (const auto& s : series) {
    for (double v : s.x) xr.add(v);
    for (double v : s.y) yr.add(v);
  }
  xr.finalize();
  yr.finalize();

  std::string out = header(title);
  append_axes(out, xr, yr, x_label, y_label);

  const auto sx = [&](double v) {
    return kLeft + (v - xr.lo) / (xr.hi - xr.lo) * (kRight - kLeft);
  };
  const auto sy = [&](double v) {
    return kBottom - (v - yr.lo) / (yr.hi - yr.lo) * (kBottom - kTop);
  };

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = kPalette[si % kPaletteSize];
    std::string points;
    const std::size_t n = std::min(s.x.size(), s.y.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      points += num(sx(s.x[i]));
      points += ',';
      points += num(sy(s.y[i]));
      points += ' ';
    }
    if (!points.empty()) points.pop_back();
    out += fmt::format(
        "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" "
        "stroke-width=\"1.5\"/>\n",
        points, color);
    const double ly = kTop + 14.0 + 18.0 * static_cast<double>(si);
    out += fmt::format(
        "<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"{3}\" "
        "stroke-width=\"3\"/>\n",
        num(kRight + 12.0), num(ly), num(kRight + 34.0), color);
    out += fmt::format(
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" "
        "font-size=\"12\">{}</text>\n",
        num(kRight + 40.0), num(ly + 4.0), escape(s.label));
  }
  out += "</svg>\n";
  csv::atomic_write(path, out);
}

void write_bar_chart(const std::filesystem::path& path, const std::string& title,
                     const std::string& y_label, const std::vector<Bar>& bars) {
  Range yr;
  yr.add(0.0);
  for (const auto& bar : bars) yr.add(bar.value);
  yr.finalize();

  std::string out = header(title);
  Range xr;
  xr.lo = 0.0;
  xr.hi = static_cast<double>(bars.empty() ? 1 : bars.size());
  append_axes(out, xr, yr, "", y_label);

  const auto sy = [&](double v) {
    return kBottom - (v - yr.lo) / (yr.hi - yr.lo) * (kBottom - kTop);
  };
  const double slot = (kRight - kLeft) / std::max<std::size_t>(bars.size(), 1);
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const double x0 = kLeft + slot * (static_cast<double>(i) + 0.2);
    const double w = slot * 0.6;
    const double y_top = sy(std::max(bars[i].value, 0.0));
    const double y_bot = sy(std::min(bars[i].value, 0.0));
    out += fmt::format(
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>\n",
        num(x0), num(y_top), num(w), num(std::max(y_bot - y_top, 0.5)),
        kPalette[i % kPaletteSize]);
    out += fmt::format(
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" "
        "text-anchor=\"middle\">{}</text>\n",
        num(x0 + w / 2.0), num(kBottom + 16.0), escape(bars[i].label));
    out += fmt::format(
        "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" "
        "text-anchor=\"middle\">{}</text>\n",
        num(x0 + w / 2.0), num(y_top - 5.0), tick_label(bars[i].value));
  }
  out += "</svg>\n";
  csv::atomic_write(path, out);
}

}  // namespace firetke::svg
