#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace firetke::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct Bar {
  std::string label;
  double value = 0.0;
};

/// Static line chart with axes, ticks, and a legend. Output is plain SVG
/// with fixed-precision coordinates, so identical inputs produce identical
/// bytes.
void write_line_chart(const std::filesystem::path& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<Series>& series);

void write_bar_chart(const std::filesystem::path& path, const std::string& title,
                     const std::string& y_label, const std::vector<Bar>& bars);

}  // namespace firetke::svg
