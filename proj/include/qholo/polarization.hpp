#pragma once

#include "qholo/grid.hpp"

namespace qholo {

/// Single-photon polarization ket in the circular {|L>, |R>} basis.
struct PolarizationKet {
  cplx amp_L{0.0, 0.0};
  cplx amp_R{0.0, 0.0};

  double norm_sq() const { return std::norm(amp_L) + std::norm(amp_R); }

  bool is_normalized(double tol = 1e-9) const { return std::abs(norm_sq() - 1.0) <= tol; }

  static PolarizationKet L() { return {1.0, 0.0}; }
  static PolarizationKet R() { return {0.0, 1.0}; }

  /// Linear polarization at angle phi from horizontal:
  /// (|L> + e^{i 2 phi} |R>) / sqrt(2). phi = 0 gives |H>.
  static PolarizationKet linear(double phi) {
    const double s = 1.0 / std::sqrt(2.0);
    return {cplx(s, 0.0), std::polar(s, 2.0 * phi)};
  }

  static PolarizationKet H() { return linear(0.0); }
  static PolarizationKet V() { return linear(kPi / 2.0); }

  PolarizationKet orthogonal() const { return {-std::conj(amp_R), std::conj(amp_L)}; }
};

/// <a|b> in the circular basis.
inline cplx inner(const PolarizationKet& a, const PolarizationKet& b) {
  return std::conj(a.amp_L) * b.amp_L + std::conj(a.amp_R) * b.amp_R;
}

}  // namespace qholo
