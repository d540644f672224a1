#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "qholo/grid.hpp"
#include "qholo/spad.hpp"

namespace qholo::io {

/// Scalar map as a standard little-endian PFM ("Pf", scale -1.0) plus a
/// JSON sidecar <path>.json recording the grid pitch in meters.
void write_pfm(const std::filesystem::path& path, const GridSpec& grid,
               const std::vector<double>& values, double pitch_override = -1.0);

struct PfmGray {
  GridSpec grid;
  std::vector<double> values;
};
PfmGray read_pfm(const std::filesystem::path& path);

/// Complex field as two concatenated "Pf" payloads (real plane then
/// imaginary plane) in one file, with the pitch sidecar.
void write_pfm_complex(const std::filesystem::path& path, const ComplexField& field);
ComplexField read_pfm_complex(const std::filesystem::path& path);

void write_phase_mask(const std::filesystem::path& path, const PhaseMask& mask);
PhaseMask read_phase_mask(const std::filesystem::path& path);

void write_intensity_pfm(const std::filesystem::path& path, const IntensityMap& map);
IntensityMap read_intensity_pfm(const std::filesystem::path& path);

/// 8-bit grayscale PNG render with a fixed normalization (min/max or an
/// explicit scale) recorded in the sidecar. Negative values clip to 0.
void write_intensity_png(const std::filesystem::path& path, const IntensityMap& map,
                         double scale_max = -1.0);

/// 8-bit RGB PNG from an interleaved buffer.
void write_png_rgb(const std::filesystem::path& path, int width, int height,
                   const std::vector<std::uint8_t>& rgb);

/// Grayscale image load (PNG, any bit depth/color collapsed to gray in
/// [0, 1]).
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<double> values;  // [0, 1]
};
GrayImage read_png_gray(const std::filesystem::path& path);

/// Flat little-endian u8 frame dump plus a JSON manifest <path>.json.
void write_frame_stack(const std::filesystem::path& path, const FrameStack& stack);
FrameStack read_frame_stack(const std::filesystem::path& path);

}  // namespace qholo::io
