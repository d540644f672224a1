#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "qholo/grid.hpp"

namespace qholo::plot {

struct Series {
  std::vector<double> x;
  std::vector<double> y;
  std::array<std::uint8_t, 3> color{0, 0, 0};
  bool markers = false;  // draw point markers in addition to the polyline
};

/// Minimal raster line plot: framed axes with tick marks, one polyline
/// per series. Good enough for the sweep-curve artifacts.
void render_line_plot(const std::filesystem::path& path, const std::vector<Series>& series,
                      int width = 900, int height = 600);

}  // namespace qholo::plot
