#include "qholo/metasurface.hpp"

#include <cmath>

namespace qholo {

MetasurfaceProfile synthesize(const PhaseMaskPair& masks, const OpticalConfig& config) {
  masks.phi_L.validate();
  masks.phi_R.validate();
  config.validate();
  if (masks.phi_L.grid != masks.phi_R.grid) throw ValidationError("synthesize: mask grids differ");

  const GridSpec& grid = masks.phi_L.grid;
  const PhaseMask lens = lens_phase(grid, config.focal_length, config.wavelength, LensKind::Converging);

  MetasurfaceProfile profile;
  profile.grid = grid;
  profile.trl_phase = PhaseMask(grid);
  profile.rotation.assign(grid.size(), 0.0);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const cplx sum = std::polar(1.0, masks.phi_L.phase[k] + lens.phase[k]) +
                     std::polar(1.0, -masks.phi_R.phase[k] - lens.phase[k]);
    double phase = 0.0;
    if (std::abs(sum) < 1e-12) {  // exact cancellation up to rounding
      profile.degenerate_pixels.push_back(k);
    } else {
      phase = wrap_phase(std::arg(sum));
    }
    profile.trl_phase.phase[k] = phase;
    profile.rotation[k] = phase / 2.0;
  }
  return profile;
}

PolarizedFieldPair jones_apply(const MetasurfaceProfile& profile, const PolarizationKet& incident,
                               const ComplexField& aperture, const OpticalConfig& config) {
  aperture.validate();
  config.validate();
  if (!incident.is_normalized()) throw ValidationError("jones_apply: incident ket not normalized");
  if (aperture.grid != profile.grid) throw ValidationError("jones_apply: aperture grid mismatch");

  const double eta = config.conversion_efficiency;
  const double cross_amp = std::sqrt(eta);
  const double co_amp = std::sqrt(1.0 - eta);

  PolarizedFieldPair out;
  out.cross_R = ComplexField(profile.grid);
  out.cross_L = ComplexField(profile.grid);
  out.co_L = ComplexField(profile.grid);
  out.co_R = ComplexField(profile.grid);

  for (std::size_t k = 0; k < profile.grid.size(); ++k) {
    const cplx a = aperture.samples[k];
    const cplx conv = std::polar(1.0, profile.trl_phase.phase[k]);
    out.cross_R.samples[k] = cross_amp * a * incident.amp_L * conv;
    out.cross_L.samples[k] = cross_amp * a * incident.amp_R * std::conj(conv);
    out.co_L.samples[k] = co_amp * a * incident.amp_L;
    out.co_R.samples[k] = co_amp * a * incident.amp_R;
  }
  return out;
}

double ideal_image_pitch(const GridSpec& source_grid, const OpticalConfig& config) {
  return config.wavelength * config.focal_length / (source_grid.width * source_grid.pitch);
}

FocusImage image_at_focus(const MetasurfaceProfile& profile, const PolarizationKet& incident,
                          const OpticalConfig& config) {
  profile.trl_phase.validate();
  config.validate();
  // The cross-polarized outputs from the L and R components are orthogonal;
  // a single image-plane field is only defined for pure circular incidence.
  if (std::abs(incident.amp_L) > 1e-12 && std::abs(incident.amp_R) > 1e-12)
    throw ValidationError("image_at_focus: incident must be pure LCP or RCP");

  const GridSpec& g = profile.grid;
  const GridSpec padded{g.width * config.pad_factor, g.height * config.pad_factor, g.pitch};
  const bool lcp_in = std::abs(incident.amp_L) > 1e-12;

  // Uniform unit-energy aperture over the metasurface support.
  const double amp = 1.0 / std::sqrt(static_cast<double>(g.size()));
  const double cross_amp = std::sqrt(config.conversion_efficiency);
  ComplexField field(padded);
  const int ox = (padded.width - g.width) / 2;
  const int oy = (padded.height - g.height) / 2;
  for (int j = 0; j < g.height; ++j) {
    for (int i = 0; i < g.width; ++i) {
      const double phase = lcp_in ? profile.trl_phase.at(i, j) : -profile.trl_phase.at(i, j);
      const cplx in = lcp_in ? incident.amp_L : incident.amp_R;
      field.at(i + ox, j + oy) = cross_amp * amp * in * std::polar(1.0, phase);
    }
  }

  PropagationResult prop = propagate(field, config.focal_length, config.wavelength);
  FocusImage out;
  out.field = std::move(prop.field);
  out.aliasing_warning = prop.aliasing_warning;
  return out;
}

IntensityMap resample_intensity(const IntensityMap& src, const GridSpec& target_grid) {
  src.validate();
  target_grid.validate();

  IntensityMap out(target_grid);
  out.measured = src.measured;
  const GridSpec& s = src.grid;
  for (int j = 0; j < target_grid.height; ++j) {
    const double y = target_grid.y(j);
    const double sj = y / s.pitch + s.height / 2;
    for (int i = 0; i < target_grid.width; ++i) {
      const double x = target_grid.x(i);
      const double si = x / s.pitch + s.width / 2;
      const int i0 = static_cast<int>(std::floor(si));
      const int j0 = static_cast<int>(std::floor(sj));
      if (i0 < 0 || j0 < 0 || i0 + 1 >= s.width || j0 + 1 >= s.height) continue;  // outside: 0
      const double tx = si - i0;
      const double ty = sj - j0;
      out.at(i, j) = (1 - tx) * (1 - ty) * src.at(i0, j0) + tx * (1 - ty) * src.at(i0 + 1, j0) +
                     (1 - tx) * ty * src.at(i0, j0 + 1) + tx * ty * src.at(i0 + 1, j0 + 1);
    }
  }
  for (double v : out.values) out.total_weight += v;
  return out;
}

IntensityMap register_focus_image(const IntensityMap& src, const GridSpec& target_grid,
                                  const OpticalConfig& config, double collection_px) {
  src.validate();
  target_grid.validate();
  config.validate();
  if (!(collection_px > 0.0))
    throw ValidationError("register_focus_image: collection_px must be > 0");

  const double f = config.focal_length;
  const GridSpec& s = src.grid;
  IntensityMap out(target_grid);
  out.measured = src.measured;
  for (int j = 0; j < target_grid.height; ++j) {
    for (int i = 0; i < target_grid.width; ++i) {
      const double x = target_grid.x(i);
      const double y = target_grid.y(j);
      const double r2 = (x * x + y * y) / (f * f);
      if (r2 >= 1.0) continue;  // beyond the propagating cone: 0
      // Radial mapping between the ideal tier's Fourier coordinate
      // (x = lambda f nu) and the focal-plane position of the hyperbolic
      // lens (x' = f tan(asin(lambda nu))), plus the flux Jacobian g^4
      // (tangential stretch g, radial stretch g^3).
      const double g = 1.0 / std::sqrt(1.0 - r2);
      const double hw = 0.5 * target_grid.pitch * collection_px;
      const int i0 = static_cast<int>(std::ceil((x - hw) * g / s.pitch)) + s.width / 2;
      const int i1 = static_cast<int>(std::floor((x + hw) * g / s.pitch)) + s.width / 2;
      const int j0 = static_cast<int>(std::ceil((y - hw) * g / s.pitch)) + s.height / 2;
      const int j1 = static_cast<int>(std::floor((y + hw) * g / s.pitch)) + s.height / 2;
      double acc = 0.0;
      int count = 0;
      for (int jj = std::max(0, j0); jj <= std::min(s.height - 1, j1); ++jj)
        for (int ii = std::max(0, i0); ii <= std::min(s.width - 1, i1); ++ii) {
          acc += src.at(ii, jj);
          ++count;
        }
      if (count > 0) out.at(i, j) = (acc / count) * g * g * g * g;
    }
  }
  for (double v : out.values) out.total_weight += v;
  return out;
}

}  // namespace qholo
