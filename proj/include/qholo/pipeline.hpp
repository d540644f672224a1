#pragma once

#include <filesystem>
#include <json.hpp>

#include "qholo/gs.hpp"
#include "qholo/metasurface.hpp"
#include "qholo/metrics.hpp"
#include "qholo/quantum.hpp"
#include "qholo/spad.hpp"
#include "qholo/target.hpp"

namespace qholo {

enum class Tier { Ideal, Physical };

/// Resolved experiment description. Angles are radians here; the JSON
/// form uses degrees.
struct ExperimentConfig {
  GridSpec source_grid{256, 256, 0.7e-6};
  OpticalConfig optical;
  GsOptions gs;
  Tier tier = Tier::Ideal;
  std::vector<double> idler_angles{0.0, kPi / 4, kPi / 2, 3 * kPi / 4};
  std::vector<double> signal_angles;
  SpadConfig spad;
  double target_fill = 0.6;
  std::filesystem::path output_dir = "out";

  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

/// Design result: the two source masks plus both ideal-tier holograms on
/// the image-plane grid (pitch lambda*f/(N*pitch_src)).
struct DesignResult {
  PhaseMaskPair masks;
  ConvergenceReport report;
  TargetHologram target;       // canonical target on the image grid
  ComplexField psi_L;
  ComplexField psi_R;
};

DesignResult design_canonical(const ExperimentConfig& config);

/// Ideal holograms recomputed from stored masks.
std::pair<ComplexField, ComplexField> ideal_holograms(const PhaseMaskPair& masks,
                                                      const OpticalConfig& optical);

/// Physical-tier holograms: Eq.-2 profile, then propagation to focus for
/// LCP and RCP incidence. Fields live on the padded metasurface-pitch grid.
struct PhysicalHolograms {
  MetasurfaceProfile profile;
  ComplexField psi_L;  // image of LCP incidence
  ComplexField psi_R;  // image of RCP incidence
  bool aliasing_warning = false;
};

PhysicalHolograms physical_holograms(const PhaseMaskPair& masks, const OpticalConfig& optical);

/// Heralded map for an idler polarizer angle, plus the no-eraser map.
IntensityMap heralded_map(const ComplexField& psi_L, const ComplexField& psi_R, double phi_i);
IntensityMap no_eraser_map(const ComplexField& psi_L, const ComplexField& psi_R);

/// Signal-polarizer sweep through the full two-photon model (idler H
/// eraser on, or eraser off). Letter means are taken over `masks`.
std::vector<SweepSample> signal_sweep(const ComplexField& psi_L, const ComplexField& psi_R,
                                      const std::vector<double>& signal_angles,
                                      const RegionMask& masks, bool eraser_on);

/// Per-letter intensity map of one sweep step (exposed for figure export).
IntensityMap sweep_step_map(const ComplexField& psi_L, const ComplexField& psi_R, double phi_s,
                            bool eraser_on);

}  // namespace qholo
