#include "qholo/target.hpp"

#include <cmath>

namespace qholo {

namespace {

// 5x7 block glyphs, '#' = lit.
const char* const kGlyphs[4][7] = {
    // H
    {"#...#", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"},
    // D
    {"####.", "#...#", "#...#", "#...#", "#...#", "#...#", "####."},
    // V
    {"#...#", "#...#", "#...#", "#...#", "#...#", ".#.#.", "..#.."},
    // A
    {".###.", "#...#", "#...#", "#####", "#...#", "#...#", "#...#"},
};

}  // namespace

void TargetHologram::validate() const {
  grid.validate();
  const std::size_t n = grid.size();
  if (amplitude.size() != n || theta.size() != n || regions.size() != n)
    throw ValidationError("TargetHologram: map sizes do not match grid");
  double energy = 0.0;
  bool any_letter = false;
  for (std::size_t k = 0; k < n; ++k) {
    if (!(amplitude[k] >= 0.0) || !std::isfinite(amplitude[k]))
      throw ValidationError("TargetHologram: amplitude must be finite and >= 0");
    if (!std::isfinite(theta[k])) throw ValidationError("TargetHologram: non-finite theta");
    if (regions[k] != kBackgroundLabel) {
      any_letter = true;
      if (regions[k] < 0 || regions[k] > 3) throw ValidationError("TargetHologram: bad region label");
      if (!(amplitude[k] > 0.0))
        throw ValidationError("TargetHologram: non-background pixel with zero amplitude");
    }
    energy += amplitude[k] * amplitude[k];
  }
  if (!any_letter || !(energy > 0.0)) throw ValidationError("TargetHologram: all-zero amplitude");
  if (std::abs(energy - 1.0) > 1e-9)
    throw ValidationError("TargetHologram: amplitude not normalized (sum a^2 != 1)");
}

void TargetHologram::normalize() {
  double energy = 0.0;
  for (double a : amplitude) energy += a * a;
  if (!(energy > 0.0)) throw ValidationError("TargetHologram: cannot normalize all-zero amplitude");
  const double s = 1.0 / std::sqrt(energy);
  for (double& a : amplitude) a *= s;
}

TargetHologram make_hdva_target(const GridSpec& grid, double fill) {
  grid.validate();
  if (!(fill > 0.0) || fill > 1.0) throw ValidationError("make_hdva_target: fill must be in (0, 1]");

  TargetHologram t;
  t.grid = grid;
  t.amplitude.assign(grid.size(), 0.0);
  t.theta.assign(grid.size(), 0.0);
  t.regions.assign(grid.size(), kBackgroundLabel);

  const int qw = grid.width / 2;
  const int qh = grid.height / 2;
  // Quadrant layout: H top-left, D top-right, V bottom-left, A bottom-right
  // (row 0 = top).
  const int qx[4] = {0, qw, 0, qw};
  const int qy[4] = {0, 0, qh, qh};

  const int scale = std::max(1, static_cast<int>(std::floor(fill * std::min(qw / 5.0, qh / 7.0))));
  const int gw = 5 * scale;
  const int gh = 7 * scale;

  for (int l = 0; l < 4; ++l) {
    const int x0 = qx[l] + (qw - gw) / 2;
    const int y0 = qy[l] + (qh - gh) / 2;
    for (int gj = 0; gj < gh; ++gj) {
      const char* row = kGlyphs[l][gj / scale];
      for (int gi = 0; gi < gw; ++gi) {
        if (row[gi / scale] != '#') continue;
        const std::size_t k = t.index(x0 + gi, y0 + gj);
        t.amplitude[k] = 1.0;
        t.theta[k] = letter_theta(static_cast<Letter>(l));
        t.regions[k] = static_cast<std::int8_t>(l);
      }
    }
  }
  t.normalize();
  return t;
}

}  // namespace qholo
