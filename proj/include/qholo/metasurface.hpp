#pragma once

#include "qholo/field_ops.hpp"
#include "qholo/grid.hpp"
#include "qholo/gs.hpp"
#include "qholo/polarization.hpp"

namespace qholo {

struct OpticalConfig {
  double wavelength = 810e-9;       // meters
  double focal_length = 1000e-6;    // meters
  double conversion_efficiency = 1.0;  // fraction reaching the cross-pol channel
  int pad_factor = 8;               // grid enlargement for free-space propagation

  void validate() const {
    if (!(wavelength > 0.0)) throw ValidationError("OpticalConfig: wavelength must be > 0");
    if (!(focal_length > 0.0)) throw ValidationError("OpticalConfig: focal_length must be > 0");
    if (conversion_efficiency < 0.0 || conversion_efficiency > 1.0)
      throw ValidationError("OpticalConfig: conversion_efficiency must be in [0, 1]");
    if (pad_factor < 1) throw ValidationError("OpticalConfig: pad_factor must be >= 1");
  }
};

/// Geometric-metasurface design: the cross-polarization transmission phase
/// Arg(t_RL) and the nanofin rotation angle alpha = Arg(t_RL)/2.
struct MetasurfaceProfile {
  GridSpec grid;
  PhaseMask trl_phase;
  std::vector<double> rotation;  // radians, trl_phase / 2
  std::vector<std::size_t> degenerate_pixels;
};

/// Combine the two source-plane masks with converging/diverging lens
/// profiles into a single geometric-metasurface phase:
/// Arg(t_RL) = Arg(e^{i phi_L} e^{i lens_conv} + e^{-i phi_R} e^{-i lens_conv}).
MetasurfaceProfile synthesize(const PhaseMaskPair& masks, const OpticalConfig& config);

struct PolarizedFieldPair {
  // Converted (geometric-phase) parts: the incident L component exits as
  // RCP with phase +trl, the incident R component as LCP with phase -trl.
  ComplexField cross_R;  // RCP output, from incident L
  ComplexField cross_L;  // LCP output, from incident R
  // Unconverted residual with unmodified phase, amplitude sqrt(1 - eta).
  ComplexField co_L;
  ComplexField co_R;

  double cross_energy() const { return cross_R.energy() + cross_L.energy(); }
  double co_energy() const { return co_L.energy() + co_R.energy(); }
};

/// Apply the geometric-phase Jones operator (t_LR = conj(t_RL)) to an
/// incident polarization over `aperture`. Energy splits eta : (1 - eta)
/// between the cross- and co-polarized channels.
PolarizedFieldPair jones_apply(const MetasurfaceProfile& profile, const PolarizationKet& incident,
                               const ComplexField& aperture, const OpticalConfig& config);

struct FocusImage {
  ComplexField field;  // image-plane field on the padded metasurface-pitch grid
  bool aliasing_warning = false;
};

/// Physical-tier forward model: uniform unit-energy aperture over the
/// profile, geometric-phase Jones operator, then angular-spectrum
/// propagation of the cross-polarized channel by focal_length. The field
/// is returned on a grid padded by config.pad_factor so the real image
/// (image-plane extent lambda*f/pitch of the ideal tier) fits the window.
FocusImage image_at_focus(const MetasurfaceProfile& profile, const PolarizationKet& incident,
                          const OpticalConfig& config);

/// Pixel pitch of the ideal-tier image plane: lambda * f / (N * pitch).
double ideal_image_pitch(const GridSpec& source_grid, const OpticalConfig& config);

/// Bilinear intensity resampling onto `target_grid` (matching physical
/// coordinates, both grids centered).
IntensityMap resample_intensity(const IntensityMap& src, const GridSpec& target_grid);

/// Register a focal-plane intensity image onto the ideal-tier grid. The
/// hyperbolic lens puts the Fourier component at x = f*tan(asin(lambda*nu))
/// rather than the ideal tier's x = lambda*f*nu, so each destination pixel
/// integrates the source over its distortion-mapped footprint (inflated to
/// `collection_px` destination pixels, covering the anisotropic stretch
/// and the aberration blur) with the radial flux Jacobian applied.
IntensityMap register_focus_image(const IntensityMap& src, const GridSpec& target_grid,
                                  const OpticalConfig& config, double collection_px = 2.0);

}  // namespace qholo
