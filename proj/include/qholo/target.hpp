#pragma once

#include <array>
#include <cstdint>

#include "qholo/grid.hpp"

namespace qholo {

enum class Letter : int { H = 0, D = 1, V = 2, A = 3 };

constexpr std::array<Letter, 4> kLetters = {Letter::H, Letter::D, Letter::V, Letter::A};

inline const char* letter_name(Letter l) {
  switch (l) {
    case Letter::H: return "H";
    case Letter::D: return "D";
    case Letter::V: return "V";
    case Letter::A: return "A";
  }
  return "?";
}

/// Per-letter target phase difference Arg(psi_L / psi_R):
/// H -> 0, D -> 3pi/2, V -> pi, A -> pi/2.
inline double letter_theta(Letter l) {
  switch (l) {
    case Letter::H: return 0.0;
    case Letter::D: return 3.0 * kPi / 2.0;
    case Letter::V: return kPi;
    case Letter::A: return kPi / 2.0;
  }
  return 0.0;
}

constexpr std::int8_t kBackgroundLabel = -1;

/// Image-plane design target: a common amplitude map, the phase
/// difference map theta(r), and a region label per pixel (-1 background,
/// otherwise the Letter index).
struct TargetHologram {
  GridSpec grid;
  std::vector<double> amplitude;     // >= 0, normalized so sum(a^2) = 1
  std::vector<double> theta;         // radians, constant per letter region
  std::vector<std::int8_t> regions;  // kBackgroundLabel or Letter index

  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * grid.width + i; }

  void validate() const;

  /// Rescale so sum(amplitude^2) = 1.
  void normalize();
};

/// Rasterize the canonical four-letter "HDVA" target on `grid`: block
/// letters H (top-left), D (top-right), V (bottom-left), A (bottom-right),
/// each centered in its quadrant, with the per-letter theta values above.
/// `fill` scales the letter box relative to its quadrant.
TargetHologram make_hdva_target(const GridSpec& grid, double fill = 0.6);

}  // namespace qholo
