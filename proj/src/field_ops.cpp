#include "qholo/field_ops.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

namespace qholo {

namespace {

std::mutex g_fftw_mutex;  // fftw planning is not thread-safe

// Transform with ifftshift on input and fftshift on output so the zero
// frequency and the spatial origin both sit at the grid midpoint.
ComplexField centered_fft(const ComplexField& field, int sign) {
  field.validate();
  const int w = field.grid.width;
  const int h = field.grid.height;
  const std::size_t n = field.grid.size();

  std::vector<cplx> buf(n);
  for (int j = 0; j < h; ++j) {
    const int js = (j + h / 2) % h;  // ifftshift
    for (int i = 0; i < w; ++i) {
      const int is = (i + w / 2) % w;
      buf[static_cast<std::size_t>(js) * w + is] = field.samples[static_cast<std::size_t>(j) * w + i];
    }
  }

  {
    std::lock_guard<std::mutex> lock(g_fftw_mutex);
    fftw_plan plan = fftw_plan_dft_2d(h, w, reinterpret_cast<fftw_complex*>(buf.data()),
                                      reinterpret_cast<fftw_complex*>(buf.data()), sign, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
  }

  ComplexField out(field.grid);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int j = 0; j < h; ++j) {
    const int js = (j + h / 2) % h;  // fftshift
    for (int i = 0; i < w; ++i) {
      const int is = (i + w / 2) % w;
      out.samples[static_cast<std::size_t>(js) * w + is] =
          buf[static_cast<std::size_t>(j) * w + i] * scale;
    }
  }
  return out;
}

}  // namespace

ComplexField dft2(const ComplexField& field) { return centered_fft(field, FFTW_FORWARD); }

ComplexField idft2(const ComplexField& field) { return centered_fft(field, FFTW_BACKWARD); }

PhaseMask lens_phase(const GridSpec& grid, double focal_length, double wavelength, LensKind kind) {
  grid.validate();
  if (!(focal_length > 0.0)) throw ValidationError("lens_phase: focal_length must be > 0");
  if (!(wavelength > 0.0)) throw ValidationError("lens_phase: wavelength must be > 0");

  PhaseMask mask(grid);
  const double k = 2.0 * kPi / wavelength;
  const double sgn = (kind == LensKind::Converging) ? -1.0 : 1.0;
  for (int j = 0; j < grid.height; ++j) {
    const double y = grid.y(j);
    for (int i = 0; i < grid.width; ++i) {
      const double x = grid.x(i);
      const double r2 = x * x + y * y;
      mask.at(i, j) = wrap_phase(sgn * k * (std::sqrt(r2 + focal_length * focal_length) - focal_length));
    }
  }
  return mask;
}

PropagationResult propagate(const ComplexField& field, double distance, double wavelength) {
  field.validate();
  if (!(wavelength > 0.0)) throw ValidationError("propagate: wavelength must be > 0");

  const GridSpec& g = field.grid;
  ComplexField spectrum = dft2(field);

  const double inv_lambda2 = 1.0 / (wavelength * wavelength);
  for (int j = 0; j < g.height; ++j) {
    const double fy = g.fy(j);
    for (int i = 0; i < g.width; ++i) {
      const double fx = g.fx(i);
      const double f2 = fx * fx + fy * fy;
      if (f2 > inv_lambda2) {
        spectrum.at(i, j) = 0.0;  // evanescent: hard cutoff
      } else {
        const double kz = 2.0 * kPi * std::sqrt(inv_lambda2 - f2);
        spectrum.at(i, j) *= std::polar(1.0, kz * distance);
      }
    }
  }

  PropagationResult result;
  result.field = idft2(spectrum);

  // The transfer-function phase is steepest at the band edge; flag the
  // result when its increment between adjacent frequency samples exceeds
  // pi there (the kernel is then undersampled on this grid).
  const double df = 1.0 / (std::max(g.width, g.height) * g.pitch);
  const double f_nyq = std::min(1.0 / (2.0 * g.pitch), 0.999 / wavelength);
  const double kz_edge = std::sqrt(std::max(inv_lambda2 - f_nyq * f_nyq, 1e-300));
  const double slope = 2.0 * kPi * f_nyq / kz_edge * std::abs(distance);
  result.aliasing_warning = slope * df > kPi;
  return result;
}

}  // namespace qholo
