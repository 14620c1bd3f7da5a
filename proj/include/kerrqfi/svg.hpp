#pragma once

#include <array>
#include <string>
#include <vector>

namespace kerrqfi {

struct SvgSeries {
  std::vector<std::array<double, 2>> points;
  std::string label;
  bool dashed = false;
  std::string color = "#303030";
};

struct SvgPlot {
  std::string title, xlabel, ylabel;
  bool xlog = false;
  int width = 760, height = 520;
  std::vector<SvgSeries> series;
};

// Self-contained SVG document (inline styling, no external assets).
// Every solid series needs at least 2 points.
std::string render_svg(const SvgPlot& plot);

// Atomic write (temp file + rename).
void write_svg(const SvgPlot& plot, const std::string& path);

}  // namespace kerrqfi
