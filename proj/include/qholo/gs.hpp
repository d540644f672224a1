#pragma once

#include <cstdint>

#include "qholo/grid.hpp"
#include "qholo/target.hpp"

namespace qholo {

struct PhaseMaskPair {
  PhaseMask phi_L;
  PhaseMask phi_R;
};

struct ConvergenceReport {
  int iterations_run = 0;
  std::vector<double> amplitude_error_history;  // relative RMS over letter pixels
  std::vector<double> phase_error_history;      // RMS wrapped phase-difference error
  bool converged = false;
};

struct GsOptions {
  int max_iterations = 200;
  double amp_tolerance = 0.05;
  double phase_tolerance = 0.05;  // radians
  std::uint64_t seed = 0;
  double relaxation = 0.85;          // reflection averaging weight, 1 = full reflections
  bool phase_constraint = true;      // false = plain two-channel GS
  bool zero_initial_phases = false;  // start from flat phase instead of the seeded draw
};

/// Ideal-tier hologram for one circular channel: dft2(U * exp(i*phi)).
ComplexField reconstruct(const PhaseMask& phi, const ComplexField& source_amplitude);

struct ConstrainResult {
  ComplexField psi_L;
  ComplexField psi_R;
  std::vector<std::size_t> degenerate_pixels;  // where the joint phasor vanished
};

/// Image-plane projection of the modified GS iteration. On letter pixels
/// both amplitudes become the target amplitude and the phases become
/// chi +/- theta/2 with chi = Arg(psi_L e^{-i theta/2} + psi_R e^{+i theta/2}),
/// so the output phase difference equals theta exactly. Background pixels
/// are zeroed.
ConstrainResult constrain_image(const ComplexField& psi_L, const ComplexField& psi_R,
                                const TargetHologram& target);

/// Uniform source amplitude with unit energy on `grid`.
ComplexField uniform_source(const GridSpec& grid);

/// Modified Gerchberg-Saxton: both circular channels iterate in lockstep
/// between the source-plane modulus constraint and the image-plane joint
/// amplitude/phase-difference constraint (via dft2/idft2). The update uses
/// relaxed averaged reflections rather than bare alternation, which is
/// what reaches the default tolerances on letter targets. Deterministic
/// given options.seed.
std::pair<PhaseMaskPair, ConvergenceReport> modified_gs(const TargetHologram& target,
                                                        const ComplexField& source_amplitude,
                                                        const GsOptions& options);

struct GsErrors {
  double amplitude = 0.0;
  double phase = 0.0;
};

/// Relative RMS amplitude error (worst of the two channels, after
/// least-squares gain removal) and RMS wrapped phase-difference error,
/// both over letter pixels.
GsErrors evaluate_errors(const ComplexField& psi_L, const ComplexField& psi_R,
                         const TargetHologram& target);

}  // namespace qholo
