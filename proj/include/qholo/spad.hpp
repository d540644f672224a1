#pragma once

#include <cstdint>

#include "qholo/grid.hpp"

namespace qholo {

struct SpadConfig {
  int frames = 600;
  double frame_duration = 0.1;   // seconds
  int max_count = 255;           // per-pixel per-frame cap
  double gate_window = 18e-9;    // seconds, carried for record
  double herald_rate = 0.0;      // events/second, carried for record
  double signal_photon_budget = 20000.0;  // expected detected signal photons per frame
  double dark_rate = 0.05;        // expected background counts per pixel per frame
  std::uint64_t seed = 1;

  void validate() const {
    if (frames < 1) throw ValidationError("SpadConfig: frames must be >= 1");
    if (max_count < 1 || max_count > 255)
      throw ValidationError("SpadConfig: max_count must be in [1, 255] (u8 storage)");
    if (signal_photon_budget < 0.0 || dark_rate < 0.0 || herald_rate < 0.0)
      throw ValidationError("SpadConfig: rates must be >= 0");
  }
};

struct FrameStack {
  GridSpec grid;
  SpadConfig config;
  std::vector<std::uint8_t> counts;  // frames * height * width, frame-major

  std::uint8_t at(int frame, int i, int j) const {
    return counts[(static_cast<std::size_t>(frame) * grid.height + j) * grid.width + i];
  }
};

/// Per-pixel, per-frame Poisson counts with mean
/// budget * intensity_p / sum(intensity) + dark_rate, clamped to
/// max_count. The random stream is keyed on (seed, frame, pixel), so the
/// result is independent of iteration order and thread count.
FrameStack simulate_frames(const IntensityMap& intensity, const SpadConfig& config);

/// Background acquisition: signal photons blocked, dark counts only.
FrameStack simulate_background(const SpadConfig& config, const GridSpec& grid);

/// Sum frames of both stacks and subtract; negative pixels are retained
/// and the result is flagged as measured.
IntensityMap accumulate_subtract(const FrameStack& signal, const FrameStack& background);

/// Deterministic Poisson draw from a keyed counter-based stream.
/// Exposed for the statistical tests.
std::uint32_t poisson_draw(double mean, std::uint64_t seed, std::uint64_t frame, std::uint64_t pixel);

}  // namespace qholo
