#pragma once

#include <complex>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace qholo {

using cplx = std::complex<double>;

/// Thrown when an input violates an operation's preconditions.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

constexpr double kPi = 3.14159265358979323846;

/// Wrap an angle to (-pi, pi].
inline double wrap_phase(double v) {
  double r = std::remainder(v, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

/// Sampling geometry of a 2-D field. Pixel (i, j) sits at physical
/// position ((i - width/2) * pitch, (j - height/2) * pitch), so the
/// grid midpoint (integer division) is the coordinate origin.
struct GridSpec {
  int width = 0;
  int height = 0;
  double pitch = 0.0;  // meters per pixel

  std::size_t size() const { return static_cast<std::size_t>(width) * height; }

  double x(int i) const { return (i - width / 2) * pitch; }
  double y(int j) const { return (j - height / 2) * pitch; }

  // Centered spatial frequency of column i / row j (cycles per meter).
  double fx(int i) const { return (i - width / 2) / (width * pitch); }
  double fy(int j) const { return (j - height / 2) / (height * pitch); }

  bool operator==(const GridSpec& o) const {
    return width == o.width && height == o.height && pitch == o.pitch;
  }
  bool operator!=(const GridSpec& o) const { return !(*this == o); }

  void validate() const {
    if (width < 2 || height < 2) throw ValidationError("GridSpec: width and height must be >= 2");
    if (!(pitch > 0.0) || !std::isfinite(pitch)) throw ValidationError("GridSpec: pitch must be > 0");
  }
};

/// 2-D complex amplitude map, row-major (index = j * width + i).
struct ComplexField {
  GridSpec grid;
  std::vector<cplx> samples;

  ComplexField() = default;
  explicit ComplexField(const GridSpec& g) : grid(g), samples(g.size(), cplx(0.0, 0.0)) {}

  cplx& at(int i, int j) { return samples[static_cast<std::size_t>(j) * grid.width + i]; }
  const cplx& at(int i, int j) const { return samples[static_cast<std::size_t>(j) * grid.width + i]; }

  double energy() const {
    double e = 0.0;
    for (const cplx& s : samples) e += std::norm(s);
    return e;
  }

  void validate() const {
    grid.validate();
    if (samples.size() != grid.size()) throw ValidationError("ComplexField: sample count does not match grid");
    for (const cplx& s : samples)
      if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
        throw ValidationError("ComplexField: non-finite sample");
  }
};

/// Real phase map in radians, entries wrapped to (-pi, pi].
struct PhaseMask {
  GridSpec grid;
  std::vector<double> phase;

  PhaseMask() = default;
  explicit PhaseMask(const GridSpec& g) : grid(g), phase(g.size(), 0.0) {}

  double& at(int i, int j) { return phase[static_cast<std::size_t>(j) * grid.width + i]; }
  double at(int i, int j) const { return phase[static_cast<std::size_t>(j) * grid.width + i]; }

  void validate() const {
    grid.validate();
    if (phase.size() != grid.size()) throw ValidationError("PhaseMask: entry count does not match grid");
    for (double p : phase)
      if (!std::isfinite(p) || p > kPi || p <= -kPi - 1e-15)
        throw ValidationError("PhaseMask: entry not finite or not wrapped to (-pi, pi]");
  }
};

/// Non-negative (analytic) or signed (measured) intensity map with a
/// bookkeeping weight carrying the heralding probability / scale.
struct IntensityMap {
  GridSpec grid;
  std::vector<double> values;
  double total_weight = 0.0;
  bool measured = false;  // measured maps may hold negative values

  IntensityMap() = default;
  explicit IntensityMap(const GridSpec& g) : grid(g), values(g.size(), 0.0) {}

  double& at(int i, int j) { return values[static_cast<std::size_t>(j) * grid.width + i]; }
  double at(int i, int j) const { return values[static_cast<std::size_t>(j) * grid.width + i]; }

  void validate() const {
    grid.validate();
    if (values.size() != grid.size()) throw ValidationError("IntensityMap: entry count does not match grid");
    for (double v : values) {
      if (!std::isfinite(v)) throw ValidationError("IntensityMap: non-finite value");
      if (!measured && v < 0.0) throw ValidationError("IntensityMap: negative value in analytic map");
    }
  }
};

}  // namespace qholo
