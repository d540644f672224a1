#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qholo/field_ops.hpp"

using namespace qholo;

namespace {

ComplexField random_field(const GridSpec& g, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> dist;
  ComplexField f(g);
  for (cplx& s : f.samples) s = cplx(dist(rng), dist(rng));
  return f;
}

// Direct O(N^4) centered unitary DFT sum.
ComplexField brute_dft2(const ComplexField& in, int sign) {
  const GridSpec& g = in.grid;
  ComplexField out(g);
  const double norm = 1.0 / std::sqrt(static_cast<double>(g.size()));
  for (int q = 0; q < g.height; ++q)
    for (int p = 0; p < g.width; ++p) {
      cplx acc = 0.0;
      for (int j = 0; j < g.height; ++j)
        for (int i = 0; i < g.width; ++i) {
          const double arg = 2.0 * kPi *
                             ((p - g.width / 2) * double(i - g.width / 2) / g.width +
                              (q - g.height / 2) * double(j - g.height / 2) / g.height);
          acc += in.at(i, j) * std::polar(1.0, sign * arg);
        }
      out.at(p, q) = acc * norm;
    }
  return out;
}

double max_abs_diff(const ComplexField& a, const ComplexField& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.samples.size(); ++k)
    m = std::max(m, std::abs(a.samples[k] - b.samples[k]));
  return m;
}

}  // namespace

TEST_CASE("dft2 of a unit sample at the origin pixel is flat") {
  GridSpec g{2, 2, 1.0};
  ComplexField f(g);
  f.at(1, 1) = 1.0;  // origin pixel = grid midpoint (width/2, height/2)
  const ComplexField out = dft2(f);
  for (const cplx& s : out.samples) CHECK(std::abs(std::abs(s) - 0.5) < 1e-15);
}

TEST_CASE("dft2 preserves energy (Parseval)") {
  const ComplexField f = random_field({16, 12, 1.0}, 42);
  const ComplexField out = dft2(f);
  CHECK(std::abs(out.energy() - f.energy()) <= 1e-12 * f.energy());
}

TEST_CASE("dft2 matches the brute-force double sum") {
  GridSpec g{4, 4, 1.0};
  ComplexField f(g);
  for (std::size_t k = 0; k < g.size(); ++k)
    f.samples[k] = double(k + 1) * std::pow(cplx(0.0, 1.0), double(k));
  CHECK(max_abs_diff(dft2(f), brute_dft2(f, -1)) < 1e-12);
}

TEST_CASE("idft2 inverts dft2") {
  const ComplexField f = random_field({8, 8, 1.0}, 7);
  CHECK(max_abs_diff(idft2(dft2(f)), f) < 1e-12);
}

TEST_CASE("idft2 matches the brute-force inverse sum on a uniform field") {
  GridSpec g{6, 6, 1.0};
  ComplexField f(g);
  for (cplx& s : f.samples) s = 1.0 / 6.0;  // 1/sqrt(36)
  const ComplexField out = idft2(f);
  CHECK(max_abs_diff(out, brute_dft2(f, +1)) < 1e-12);
  // delta of unit magnitude at the center pixel
  CHECK(std::abs(out.at(3, 3) - cplx(1.0, 0.0)) < 1e-12);
}

TEST_CASE("idft2 of zero is zero") {
  ComplexField f({4, 4, 1.0});
  const ComplexField out = idft2(f);
  for (const cplx& s : out.samples) CHECK(s == cplx(0.0, 0.0));
}

TEST_CASE("dft2 rejects non-finite input") {
  ComplexField f({4, 4, 1.0});
  f.samples[3] = cplx(std::nan(""), 0.0);
  CHECK_THROWS_AS((void)dft2(f), ValidationError);
}

TEST_CASE("lens phase is zero on axis and matches the closed form") {
  GridSpec g{256, 256, 0.7e-6};
  const double lambda = 0.810e-6, f = 1000e-6;
  const PhaseMask conv = lens_phase(g, f, lambda, LensKind::Converging);
  const PhaseMask div = lens_phase(g, f, lambda, LensKind::Diverging);
  CHECK(conv.phase[conv.grid.height / 2 * conv.grid.width + conv.grid.width / 2] == 0.0);
  CHECK(div.phase[div.grid.height / 2 * div.grid.width + div.grid.width / 2] == 0.0);

  // r = 100 um: unwrapped value -(2pi/lambda)(sqrt(r^2+f^2)-f) ~ -38.7 rad
  const double r100 = 100e-6;
  const double unwrapped = -(2.0 * kPi / lambda) * (std::sqrt(r100 * r100 + f * f) - f);
  CHECK(unwrapped == doctest::Approx(-38.7).epsilon(0.01));
  // compare wrapped against the closed form 100 columns right of center (x = 70 um)
  const int i = g.width / 2 + 100;
  const double r = g.x(i);
  CHECK(r == doctest::Approx(70e-6).epsilon(1e-9));
  const double expected = -(2.0 * kPi / lambda) * (std::sqrt(r * r + f * f) - f);
  const double got = conv.phase[static_cast<std::size_t>(g.height / 2) * g.width + i];
  CHECK(std::abs(wrap_phase(got - expected)) < 1e-9);
}

TEST_CASE("lens phase approaches the paraxial parabola for r << f") {
  const double lambda = 0.810e-6, f = 1000e-6;
  GridSpec g{4, 4, f / 20.0};  // nearest off-center pixel sits at r = f/20
  const PhaseMask conv = lens_phase(g, f, lambda, LensKind::Converging);
  const double r = f / 20.0;
  const double exact = -(2.0 * kPi / lambda) * (std::sqrt(r * r + f * f) - f);
  const double paraxial = -kPi * r * r / (lambda * f);
  CHECK(std::abs((exact - paraxial) / exact) < 0.01);
  const int i = g.width / 2 + 1;
  const double got = conv.phase[static_cast<std::size_t>(g.height / 2) * g.width + i];
  CHECK(std::abs(wrap_phase(got - exact)) < 1e-9);
}

TEST_CASE("converging and diverging lens phases cancel") {
  GridSpec g{32, 32, 2e-6};
  const PhaseMask conv = lens_phase(g, 500e-6, 0.8e-6, LensKind::Converging);
  const PhaseMask div = lens_phase(g, 500e-6, 0.8e-6, LensKind::Diverging);
  for (std::size_t k = 0; k < g.size(); ++k)
    CHECK(std::abs(wrap_phase(conv.phase[k] + div.phase[k])) < 1e-12);
}

TEST_CASE("lens phase rejects non-positive parameters") {
  GridSpec g{8, 8, 1e-6};
  CHECK_THROWS_AS((void)lens_phase(g, 0.0, 1e-6, LensKind::Converging), ValidationError);
  CHECK_THROWS_AS((void)lens_phase(g, 1e-3, -1e-6, LensKind::Converging), ValidationError);
}

TEST_CASE("propagation by zero distance is the identity") {
  const ComplexField f = random_field({16, 16, 1e-6}, 3);
  const PropagationResult r = propagate(f, 0.0, 0.8e-6);
  CHECK(max_abs_diff(r.field, f) < 1e-12);
}

TEST_CASE("a uniform plane wave gains only the global phase 2 pi z / lambda") {
  GridSpec g{32, 32, 1e-6};
  ComplexField f(g);
  for (cplx& s : f.samples) s = 1.0;
  const double lambda = 0.8e-6, z = 13.7e-6;
  const PropagationResult r = propagate(f, z, lambda);
  const cplx expected = std::polar(1.0, 2.0 * kPi * z / lambda);
  for (const cplx& s : r.field.samples) CHECK(std::abs(s - expected) < 1e-9);
}

TEST_CASE("Gaussian beam widens by sqrt(2) over one Rayleigh range") {
  const double lambda = 0.8e-6;
  const double w0 = 10.0 * lambda;
  const double zr = kPi * w0 * w0 / lambda;
  GridSpec g{256, 256, w0 / 8.0};
  ComplexField f(g);
  for (int j = 0; j < g.height; ++j)
    for (int i = 0; i < g.width; ++i) {
      const double r2 = g.x(i) * g.x(i) + g.y(j) * g.y(j);
      f.at(i, j) = std::exp(-r2 / (w0 * w0));
    }
  const PropagationResult out = propagate(f, zr, lambda);
  CHECK_FALSE(out.aliasing_warning);

  // intensity second moment along x through the center row
  auto width_of = [&](const ComplexField& field) {
    double sw = 0.0, sx2 = 0.0;
    for (int j = 0; j < g.height; ++j)
      for (int i = 0; i < g.width; ++i) {
        const double v = std::norm(field.at(i, j));
        sw += v;
        sx2 += v * g.x(i) * g.x(i);
      }
    return std::sqrt(sx2 / sw);
  };
  const double ratio = width_of(out.field) / width_of(f);
  CHECK(ratio == doctest::Approx(std::sqrt(2.0)).epsilon(0.02));
}

TEST_CASE("propagation conserves energy for band-limited fields") {
  const double lambda = 0.8e-6;
  GridSpec g{64, 64, 2e-6};  // Nyquist 1/(2 pitch) = 0.25/um < 1/lambda = 1.25/um
  const ComplexField f = random_field(g, 11);
  const PropagationResult out = propagate(f, 50e-6, lambda);
  CHECK(std::abs(out.field.energy() - f.energy()) <= 1e-9 * f.energy());
}

TEST_CASE("propagating forward then backward is the identity for band-limited fields") {
  const double lambda = 0.8e-6;
  const ComplexField f = random_field({32, 32, 2e-6}, 5);
  const PropagationResult fwd = propagate(f, 80e-6, lambda);
  const PropagationResult back = propagate(fwd.field, -80e-6, lambda);
  CHECK(max_abs_diff(back.field, f) < 1e-9);
}

TEST_CASE("evanescent components are removed") {
  const double lambda = 2.0e-6;
  GridSpec g{32, 32, 0.5e-6};  // band edge 1/um > 1/lambda = 0.5/um
  ComplexField f(g);
  f.at(16, 16) = 1.0;  // delta: white spectrum, much of it evanescent
  const PropagationResult out = propagate(f, 10e-6, lambda);
  CHECK(out.field.energy() < f.energy());
  // and the surviving part stays stable under further propagation
  const PropagationResult again = propagate(out.field, 10e-6, lambda);
  CHECK(std::abs(again.field.energy() - out.field.energy()) <= 1e-9 * out.field.energy());
}

TEST_CASE("undersampled transfer function raises the aliasing flag") {
  const double lambda = 0.8e-6;
  GridSpec g{16, 16, 5e-6};
  const ComplexField f = random_field(g, 9);
  // phase step between band-edge frequency samples grows with distance
  const PropagationResult far = propagate(f, 0.5, lambda);
  CHECK(far.aliasing_warning);
  const PropagationResult near = propagate(f, 1e-6, lambda);
  CHECK_FALSE(near.aliasing_warning);
}
