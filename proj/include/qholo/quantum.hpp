#pragma once

#include <optional>

#include "qholo/grid.hpp"
#include "qholo/polarization.hpp"

namespace qholo {

/// One product term of a two-photon state: complex weight, idler
/// polarization ket, optional signal polarization ket (absent once the
/// signal polarization slot has been contracted), and a signal spatial
/// field. The state is the coherent sum over terms.
struct StateTerm {
  cplx weight{0.0, 0.0};
  PolarizationKet idler;
  std::optional<PolarizationKet> signal_pol;
  ComplexField field;
};

struct TwoPhotonState {
  std::vector<StateTerm> terms;
  bool idler_projected = false;

  bool signal_projected() const;

  /// Squared norm via the Gram matrix of the term fields (the fields need
  /// not be orthogonal).
  double norm_sq() const;

  void validate() const;
};

/// (|L>_i |L>_s - |R>_i |R>_s) / sqrt(2) with a uniform unit-energy
/// signal-field placeholder on `grid`.
TwoPhotonState bell_state(const GridSpec& grid);

/// Spin-orbit metasurface operator M1 on the signal photon: the signal
/// |L> component becomes (|R>, psi_L), the |R> component (|L>, psi_R).
/// Not renormalized.
TwoPhotonState apply_metasurface(const TwoPhotonState& state, const ComplexField& psi_L,
                                 const ComplexField& psi_R);

/// The hybrid-entangled state (|L>_i |psi_L> - |R>_i |psi_R>) / sqrt(2)
/// with the signal polarization slot already absorbed (the fixed
/// horizontal analyzer of the forward model).
TwoPhotonState hybrid_state(const ComplexField& psi_L, const ComplexField& psi_R);

struct HeraldedState {
  TwoPhotonState state;  // unnormalized
  double probability = 0.0;
};

/// Contract the idler slot with the conjugated polarizer ket. The
/// returned state is unnormalized; `probability` is its squared norm.
HeraldedState project_idler(const TwoPhotonState& state, const PolarizationKet& polarizer);

/// Contract the signal polarization slot with a linear polarizer at
/// angle phi_s, i.e. with (<L| + e^{-i 2 phi_s} <R|) / sqrt(2).
TwoPhotonState project_signal_polarizer(const TwoPhotonState& state, double phi_s);

/// |sum of remaining fields|^2; requires every polarization slot projected.
IntensityMap heralded_intensity(const TwoPhotonState& state);

/// Partial trace over the idler polarization: incoherent sum of heralded
/// intensities over an orthonormal idler basis (and over the signal
/// polarization basis if that slot is still open).
IntensityMap unheralded_intensity(const TwoPhotonState& state);

/// Analytic interference law sin^2(phi_s - theta_letter / 2).
double letter_intensity_law(double phi_s, double theta_letter);

}  // namespace qholo
