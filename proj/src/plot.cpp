#include "qholo/plot.hpp"

#include <algorithm>
#include <cmath>

#include "qholo/io.hpp"

namespace qholo::plot {

namespace {

struct Canvas {
  int w, h;
  std::vector<std::uint8_t> rgb;

  Canvas(int width, int height) : w(width), h(height), rgb(static_cast<std::size_t>(w) * h * 3, 255) {}

  void set(int x, int y, const std::array<std::uint8_t, 3>& c) {
    if (x < 0 || y < 0 || x >= w || y >= h) return;
    const std::size_t k = (static_cast<std::size_t>(y) * w + x) * 3;
    rgb[k] = c[0];
    rgb[k + 1] = c[1];
    rgb[k + 2] = c[2];
  }

  void line(int x0, int y0, int x1, int y1, const std::array<std::uint8_t, 3>& c) {
    const int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
    const int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    for (;;) {
      set(x0, y0, c);
      if (x0 == x1 && y0 == y1) break;
      const int e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        x0 += sx;
      }
      if (e2 <= dx) {
        err += dx;
        y0 += sy;
      }
    }
  }

  void dot(int x, int y, const std::array<std::uint8_t, 3>& c) {
    for (int dj = -2; dj <= 2; ++dj)
      for (int di = -2; di <= 2; ++di)
        if (di * di + dj * dj <= 4) set(x + di, y + dj, c);
  }
};

}  // namespace

void render_line_plot(const std::filesystem::path& path, const std::vector<Series>& series,
                      int width, int height) {
  Canvas canvas(width, height);
  const int ml = 60, mr = 20, mt = 20, mb = 40;  // margins
  const int px0 = ml, px1 = width - mr, py0 = mt, py1 = height - mb;

  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  bool first = true;
  for (const Series& s : series) {
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      if (first) {
        xmin = xmax = s.x[k];
        ymin = ymax = s.y[k];
        first = false;
      }
      xmin = std::min(xmin, s.x[k]);
      xmax = std::max(xmax, s.x[k]);
      ymin = std::min(ymin, s.y[k]);
      ymax = std::max(ymax, s.y[k]);
    }
  }
  if (xmax <= xmin) xmax = xmin + 1.0;
  if (ymax <= ymin) ymax = ymin + 1.0;
  ymin = std::min(ymin, 0.0);
  ymax *= 1.05;

  auto to_px = [&](double x) { return px0 + static_cast<int>(std::lround((x - xmin) / (xmax - xmin) * (px1 - px0))); };
  auto to_py = [&](double y) { return py1 - static_cast<int>(std::lround((y - ymin) / (ymax - ymin) * (py1 - py0))); };

  const std::array<std::uint8_t, 3> black{0, 0, 0};
  canvas.line(px0, py0, px0, py1, black);
  canvas.line(px0, py1, px1, py1, black);
  for (int t = 0; t <= 8; ++t) {
    const int x = px0 + (px1 - px0) * t / 8;
    const int y = py1 - (py1 - py0) * t / 8;
    canvas.line(x, py1, x, py1 + 5, black);
    canvas.line(px0 - 5, y, px0, y, black);
  }

  for (const Series& s : series) {
    for (std::size_t k = 0; k + 1 < s.x.size(); ++k)
      canvas.line(to_px(s.x[k]), to_py(s.y[k]), to_px(s.x[k + 1]), to_py(s.y[k + 1]), s.color);
    if (s.markers)
      for (std::size_t k = 0; k < s.x.size(); ++k) canvas.dot(to_px(s.x[k]), to_py(s.y[k]), s.color);
  }

  io::write_png_rgb(path, width, height, canvas.rgb);
}

}  // namespace qholo::plot
