#include "qholo/pipeline.hpp"

#include <cmath>

namespace qholo {

namespace {

using nlohmann::json;

constexpr double kDeg = kPi / 180.0;

std::vector<double> degrees_to_radians(const json& arr) {
  std::vector<double> out;
  for (const auto& v : arr) out.push_back(v.get<double>() * kDeg);
  return out;
}

json radians_to_degrees(const std::vector<double>& v) {
  json arr = json::array();
  for (double x : v) arr.push_back(x / kDeg);
  return arr;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig c;
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    c.source_grid.width = g.value("width", c.source_grid.width);
    c.source_grid.height = g.value("height", c.source_grid.height);
    if (g.contains("pitch_um")) c.source_grid.pitch = g.at("pitch_um").get<double>() * 1e-6;
  }
  if (j.contains("optical")) {
    const json& o = j.at("optical");
    if (o.contains("wavelength_nm")) c.optical.wavelength = o.at("wavelength_nm").get<double>() * 1e-9;
    if (o.contains("focal_length_um")) c.optical.focal_length = o.at("focal_length_um").get<double>() * 1e-6;
    c.optical.conversion_efficiency = o.value("conversion_efficiency", c.optical.conversion_efficiency);
    c.optical.pad_factor = o.value("pad_factor", c.optical.pad_factor);
  }
  if (j.contains("gs")) {
    const json& g = j.at("gs");
    c.gs.max_iterations = g.value("iterations", c.gs.max_iterations);
    c.gs.amp_tolerance = g.value("amp_tolerance", c.gs.amp_tolerance);
    c.gs.phase_tolerance = g.value("phase_tolerance", c.gs.phase_tolerance);
    c.gs.seed = g.value("seed", c.gs.seed);
  }
  if (j.contains("tier")) {
    const std::string t = j.at("tier").get<std::string>();
    if (t == "ideal")
      c.tier = Tier::Ideal;
    else if (t == "physical")
      c.tier = Tier::Physical;
    else
      throw ValidationError("config: tier must be 'ideal' or 'physical'");
  }
  if (j.contains("idler_angles_deg")) c.idler_angles = degrees_to_radians(j.at("idler_angles_deg"));
  if (j.contains("signal_angles_deg")) c.signal_angles = degrees_to_radians(j.at("signal_angles_deg"));
  if (j.contains("spad")) {
    const json& s = j.at("spad");
    c.spad.frames = s.value("frames", c.spad.frames);
    c.spad.frame_duration = s.value("frame_duration_s", c.spad.frame_duration);
    c.spad.max_count = s.value("max_count", c.spad.max_count);
    c.spad.gate_window = s.value("gate_window_s", c.spad.gate_window);
    c.spad.herald_rate = s.value("herald_rate_hz", c.spad.herald_rate);
    c.spad.signal_photon_budget = s.value("signal_photon_budget", c.spad.signal_photon_budget);
    c.spad.dark_rate = s.value("dark_rate", c.spad.dark_rate);
    c.spad.seed = s.value("seed", c.spad.seed);
  }
  c.target_fill = j.value("target_fill", c.target_fill);
  if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
  c.source_grid.validate();
  c.optical.validate();
  c.spad.validate();
  return c;
}

json ExperimentConfig::to_json() const {
  return json{
      {"grid",
       {{"width", source_grid.width}, {"height", source_grid.height}, {"pitch_um", source_grid.pitch * 1e6}}},
      {"optical",
       {{"wavelength_nm", optical.wavelength * 1e9},
        {"focal_length_um", optical.focal_length * 1e6},
        {"conversion_efficiency", optical.conversion_efficiency},
        {"pad_factor", optical.pad_factor}}},
      {"gs",
       {{"iterations", gs.max_iterations},
        {"amp_tolerance", gs.amp_tolerance},
        {"phase_tolerance", gs.phase_tolerance},
        {"seed", gs.seed}}},
      {"tier", tier == Tier::Ideal ? "ideal" : "physical"},
      {"idler_angles_deg", radians_to_degrees(idler_angles)},
      {"signal_angles_deg", radians_to_degrees(signal_angles)},
      {"spad",
       {{"frames", spad.frames},
        {"frame_duration_s", spad.frame_duration},
        {"max_count", spad.max_count},
        {"gate_window_s", spad.gate_window},
        {"herald_rate_hz", spad.herald_rate},
        {"signal_photon_budget", spad.signal_photon_budget},
        {"dark_rate", spad.dark_rate},
        {"seed", spad.seed}}},
      {"target_fill", target_fill},
      {"output_dir", output_dir.string()}};
}

std::pair<ComplexField, ComplexField> ideal_holograms(const PhaseMaskPair& masks,
                                                      const OpticalConfig& optical) {
  const ComplexField source = uniform_source(masks.phi_L.grid);
  ComplexField psi_L = reconstruct(masks.phi_L, source);
  ComplexField psi_R = reconstruct(masks.phi_R, source);
  const double image_pitch = ideal_image_pitch(masks.phi_L.grid, optical);
  psi_L.grid.pitch = image_pitch;
  psi_R.grid.pitch = image_pitch;
  return {std::move(psi_L), std::move(psi_R)};
}

DesignResult design_canonical(const ExperimentConfig& config) {
  DesignResult result;
  GridSpec image_grid = config.source_grid;
  image_grid.pitch = ideal_image_pitch(config.source_grid, config.optical);
  result.target = make_hdva_target(image_grid, config.target_fill);

  // The GS loop works between Fourier-conjugate planes on matching pixel
  // counts; the target carries the image-plane pitch for downstream
  // geometry while the transform itself is pitch-agnostic.
  TargetHologram gs_target = result.target;
  gs_target.grid = config.source_grid;

  const ComplexField source = uniform_source(config.source_grid);
  auto [masks, report] = modified_gs(gs_target, source, config.gs);
  result.masks = std::move(masks);
  result.report = std::move(report);

  auto fields = ideal_holograms(result.masks, config.optical);
  result.psi_L = std::move(fields.first);
  result.psi_R = std::move(fields.second);
  return result;
}

PhysicalHolograms physical_holograms(const PhaseMaskPair& masks, const OpticalConfig& optical) {
  PhysicalHolograms out;
  out.profile = synthesize(masks, optical);
  FocusImage img_L = image_at_focus(out.profile, PolarizationKet::L(), optical);
  FocusImage img_R = image_at_focus(out.profile, PolarizationKet::R(), optical);
  out.aliasing_warning = img_L.aliasing_warning || img_R.aliasing_warning;
  out.psi_L = std::move(img_L.field);
  out.psi_R = std::move(img_R.field);
  return out;
}

IntensityMap heralded_map(const ComplexField& psi_L, const ComplexField& psi_R, double phi_i) {
  const TwoPhotonState phi = hybrid_state(psi_L, psi_R);
  const HeraldedState heralded = project_idler(phi, PolarizationKet::linear(phi_i));
  IntensityMap map = heralded_intensity(heralded.state);
  map.total_weight = heralded.probability;
  return map;
}

IntensityMap no_eraser_map(const ComplexField& psi_L, const ComplexField& psi_R) {
  return unheralded_intensity(hybrid_state(psi_L, psi_R));
}

IntensityMap sweep_step_map(const ComplexField& psi_L, const ComplexField& psi_R, double phi_s,
                            bool eraser_on) {
  const TwoPhotonState bell = bell_state(psi_L.grid);
  const TwoPhotonState intermediate = apply_metasurface(bell, psi_L, psi_R);
  if (eraser_on) {
    const HeraldedState heralded = project_idler(intermediate, PolarizationKet::H());
    return heralded_intensity(project_signal_polarizer(heralded.state, phi_s));
  }
  return unheralded_intensity(project_signal_polarizer(intermediate, phi_s));
}

std::vector<SweepSample> signal_sweep(const ComplexField& psi_L, const ComplexField& psi_R,
                                      const std::vector<double>& signal_angles,
                                      const RegionMask& masks, bool eraser_on) {
  std::vector<SweepSample> samples;
  samples.reserve(signal_angles.size());
  for (double phi_s : signal_angles) {
    const IntensityMap map = sweep_step_map(psi_L, psi_R, phi_s, eraser_on);
    SweepSample s;
    s.phi_s = phi_s;
    for (int l = 0; l < 4; ++l) s.letter_mean[l] = mean_over(map, masks.letter_pixels[l]);
    samples.push_back(s);
  }
  return samples;
}

}  // namespace qholo
