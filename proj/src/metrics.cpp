#include "qholo/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace qholo {

void RegionMask::validate() const {
  grid.validate();
  for (int l = 0; l < 4; ++l) {
    if (letter_pixels[l].empty()) throw ValidationError("RegionMask: empty letter region");
    for (std::size_t k : letter_pixels[l])
      if (k >= grid.size()) throw ValidationError("RegionMask: pixel index out of grid");
    for (std::size_t k : background_pixels[l]) {
      if (k >= grid.size()) throw ValidationError("RegionMask: pixel index out of grid");
      if (std::binary_search(letter_pixels[l].begin(), letter_pixels[l].end(), k))
        throw ValidationError("RegionMask: letter and background sets overlap");
    }
  }
}

RegionMask make_region_mask(const TargetHologram& target) {
  target.validate();
  RegionMask mask;
  mask.grid = target.grid;
  const int qw = target.grid.width / 2;
  const int qh = target.grid.height / 2;
  // Quadrant order matches make_hdva_target: H top-left, D top-right,
  // V bottom-left, A bottom-right.
  for (int j = 0; j < target.grid.height; ++j) {
    for (int i = 0; i < target.grid.width; ++i) {
      const std::size_t k = target.index(i, j);
      const int quadrant = (j < qh ? 0 : 2) + (i < qw ? 0 : 1);
      if (target.regions[k] == kBackgroundLabel)
        mask.background_pixels[quadrant].push_back(k);
      else
        mask.letter_pixels[target.regions[k]].push_back(k);
    }
  }
  mask.validate();
  return mask;
}

double mean_over(const IntensityMap& img, const std::vector<std::size_t>& pixels) {
  if (pixels.empty()) throw ValidationError("mean_over: empty pixel set");
  double acc = 0.0;
  for (std::size_t k : pixels) acc += img.values[k];
  return acc / static_cast<double>(pixels.size());
}

DropResult intensity_drop(const IntensityMap& erased_img, const IntensityMap& reference_img,
                          const RegionMask& masks, Letter letter) {
  if (erased_img.grid != masks.grid || reference_img.grid != masks.grid)
    throw ValidationError("intensity_drop: image/mask grid mismatch");
  const int l = static_cast<int>(letter);
  const double i_e = mean_over(erased_img, masks.letter_pixels[l]) -
                     mean_over(erased_img, masks.background_pixels[l]);
  const double i_w = mean_over(reference_img, masks.letter_pixels[l]) -
                     mean_over(reference_img, masks.background_pixels[l]);
  if (!(i_w > 0.0)) throw ValidationError("intensity_drop: reference letter intensity <= 0");

  DropResult r;
  const double floor = 1e-6 * i_w;
  if (i_e <= floor) {
    r.db = 10.0 * std::log10(1e-6);  // reported as <= -60 dB
    r.floored = true;
  } else {
    r.db = 10.0 * std::log10(i_e / i_w);
  }
  return r;
}

double contrast(const IntensityMap& img, const RegionMask& masks, Letter letter) {
  if (img.grid != masks.grid) throw ValidationError("contrast: image/mask grid mismatch");
  const int l = static_cast<int>(letter);
  const double bg = mean_over(img, masks.background_pixels[l]);
  if (!(bg > 0.0)) throw ValidationError("contrast: non-positive background mean");
  const double lt = mean_over(img, masks.letter_pixels[l]);
  if (!(lt > bg)) throw ValidationError("contrast: letter not above background");
  return 10.0 * std::log10((lt - bg) / bg);
}

double pearson(const IntensityMap& img_a, const IntensityMap& img_b,
               const std::vector<std::size_t>& region) {
  if (region.empty()) throw ValidationError("pearson: empty region");
  if (img_a.grid != img_b.grid) throw ValidationError("pearson: image grid mismatch");
  const double n = static_cast<double>(region.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t k : region) {
    ma += img_a.values[k];
    mb += img_b.values[k];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t k : region) {
    const double da = img_a.values[k] - ma;
    const double db = img_b.values[k] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (!(saa > 0.0) || !(sbb > 0.0))
    throw ValidationError("pearson: zero variance over the region");
  return sab / std::sqrt(saa * sbb);
}

std::vector<std::size_t> letter_with_background(const RegionMask& masks, Letter letter) {
  const int l = static_cast<int>(letter);
  std::vector<std::size_t> region = masks.letter_pixels[l];
  region.insert(region.end(), masks.background_pixels[l].begin(), masks.background_pixels[l].end());
  return region;
}

VisibilityFit visibility_fit(const std::vector<SweepSample>& samples, Letter letter) {
  if (samples.size() < 8) throw ValidationError("visibility_fit: need at least 8 samples");
  double lo = samples.front().phi_s, hi = samples.front().phi_s;
  for (const SweepSample& s : samples) {
    lo = std::min(lo, s.phi_s);
    hi = std::max(hi, s.phi_s);
  }
  if (hi - lo < kPi - 1e-9) throw ValidationError("visibility_fit: samples must span at least pi");

  // I = c0 + cu cos(2 phi) + cv sin(2 phi) with
  // c0 = A/2 + B, cu = -(A/2) cos(rho), cv = (A/2) sin(rho), rho = 2 delta - theta.
  double m[3][3] = {{0}};
  double rhs[3] = {0};
  const int l = static_cast<int>(letter);
  for (const SweepSample& s : samples) {
    const double basis[3] = {1.0, std::cos(2.0 * s.phi_s), std::sin(2.0 * s.phi_s)};
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) m[a][b] += basis[a] * basis[b];
      rhs[a] += basis[a] * s.letter_mean[l];
    }
  }
  // Gaussian elimination with partial pivoting on the 3x3 normal system.
  double c[3];
  {
    double aug[3][4];
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) aug[a][b] = m[a][b];
      aug[a][3] = rhs[a];
    }
    for (int col = 0; col < 3; ++col) {
      int piv = col;
      for (int r = col + 1; r < 3; ++r)
        if (std::abs(aug[r][col]) > std::abs(aug[piv][col])) piv = r;
      if (std::abs(aug[piv][col]) < 1e-14)
        throw ValidationError("visibility_fit: degenerate sample design");
      std::swap(aug[col], aug[piv]);
      for (int r = 0; r < 3; ++r) {
        if (r == col) continue;
        const double f = aug[r][col] / aug[col][col];
        for (int b = col; b < 4; ++b) aug[r][b] -= f * aug[col][b];
      }
    }
    for (int a = 0; a < 3; ++a) c[a] = aug[a][3] / aug[a][a];
  }

  VisibilityFit fit;
  fit.amplitude = 2.0 * std::hypot(c[1], c[2]);
  const double rho = std::atan2(c[2], -c[1]);
  double delta = (rho + letter_theta(letter)) / 2.0;
  // delta is defined mod pi; report in (-pi/2, pi/2].
  delta = std::remainder(delta, kPi);
  if (delta <= -kPi / 2.0) delta += kPi;
  fit.delta = delta;
  fit.offset = std::max(0.0, c[0] - fit.amplitude / 2.0);
  const double denom = fit.amplitude + 2.0 * fit.offset;
  fit.visibility = denom > 0.0 ? fit.amplitude / denom : 0.0;
  return fit;
}

}  // namespace qholo
