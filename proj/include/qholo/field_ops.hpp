#pragma once

#include "qholo/grid.hpp"

namespace qholo {

/// Centered, unitary 2-D DFT: zero frequency lands at the grid midpoint
/// and the transform scales by 1/sqrt(width*height), so Parseval holds
/// exactly. A unit sample at the midpoint transforms to a flat field.
ComplexField dft2(const ComplexField& field);

/// Exact inverse of dft2.
ComplexField idft2(const ComplexField& field);

enum class LensKind { Converging, Diverging };

/// Hyperbolic lens phase profile -(2pi/lambda)(sqrt(r^2+f^2) - f) for a
/// converging lens, negated for a diverging one; wrapped to (-pi, pi].
PhaseMask lens_phase(const GridSpec& grid, double focal_length, double wavelength, LensKind kind);

struct PropagationResult {
  ComplexField field;
  bool aliasing_warning = false;  // transfer-function phase undersampled
};

/// Angular-spectrum free-space propagation by `distance` (negative values
/// back-propagate). Spatial frequencies beyond 1/lambda are zeroed.
PropagationResult propagate(const ComplexField& field, double distance, double wavelength);

}  // namespace qholo
