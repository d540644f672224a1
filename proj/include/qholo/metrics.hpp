#pragma once

#include <array>
#include <map>

#include "qholo/grid.hpp"
#include "qholo/target.hpp"

namespace qholo {

/// Letter and per-letter regional background pixel sets. The regional
/// background of a letter is its quadrant minus the letter pixels.
struct RegionMask {
  GridSpec grid;
  std::array<std::vector<std::size_t>, 4> letter_pixels;
  std::array<std::vector<std::size_t>, 4> background_pixels;

  void validate() const;
};

/// Build the canonical mask from a target's region labels (one letter per
/// quadrant).
RegionMask make_region_mask(const TargetHologram& target);

struct SweepSample {
  double phi_s = 0.0;                      // radians
  std::array<double, 4> letter_mean{};     // mean intensity per letter
};

struct DropResult {
  double db = 0.0;
  bool floored = false;  // erased intensity hit the reporting floor
};

/// Appendix-style intensity drop 10*log10(I_e / I_w) with
/// I = mean(letter) - mean(regional background). A non-positive erased
/// intensity is floored at 1e-6 * I_w and flagged (reported <= -60 dB).
DropResult intensity_drop(const IntensityMap& erased_img, const IntensityMap& reference_img,
                          const RegionMask& masks, Letter letter);

/// Letter-vs-background contrast 10*log10((mean_letter - mean_bg) / mean_bg).
double contrast(const IntensityMap& img, const RegionMask& masks, Letter letter);

/// Centered Pearson correlation over an explicit pixel set.
double pearson(const IntensityMap& img_a, const IntensityMap& img_b,
               const std::vector<std::size_t>& region);

/// Letter region plus its regional background, the Appendix-C comparison
/// region.
std::vector<std::size_t> letter_with_background(const RegionMask& masks, Letter letter);

struct VisibilityFit {
  double amplitude = 0.0;   // A
  double offset = 0.0;      // B
  double delta = 0.0;       // radians, in (-pi/2, pi/2]
  double visibility = 0.0;  // A / (A + 2B)
};

/// Closed-form least-squares fit of I(phi_s) = A sin^2(phi_s - theta/2 + delta) + B
/// via the linearization in (cos 2phi, sin 2phi). Requires >= 8 samples
/// spanning at least pi.
VisibilityFit visibility_fit(const std::vector<SweepSample>& samples, Letter letter);

double mean_over(const IntensityMap& img, const std::vector<std::size_t>& pixels);

}  // namespace qholo
