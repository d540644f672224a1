#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <random>

#include "qholo/io.hpp"

using namespace qholo;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "qholo_io_tests";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("scalar PFM round trip preserves values and pitch") {
  GridSpec g{7, 5, 1.3e-6};
  std::vector<double> values(g.size());
  std::mt19937 rng(1);
  std::normal_distribution<double> dist;
  for (double& v : values) v = dist(rng);

  const fs::path p = scratch_dir() / "scalar.pfm";
  io::write_pfm(p, g, values);
  const io::PfmGray back = io::read_pfm(p);
  CHECK(back.grid.width == g.width);
  CHECK(back.grid.height == g.height);
  CHECK(back.grid.pitch == doctest::Approx(g.pitch).epsilon(1e-12));
  REQUIRE(back.values.size() == values.size());
  // PFM payload is float32: compare at single precision
  for (std::size_t k = 0; k < values.size(); ++k)
    CHECK(back.values[k] == doctest::Approx(values[k]).epsilon(1e-6));
}

TEST_CASE("complex-field PFM round trip") {
  GridSpec g{6, 4, 0.7e-6};
  ComplexField f(g);
  std::mt19937 rng(2);
  std::normal_distribution<double> dist;
  for (cplx& s : f.samples) s = cplx(dist(rng), dist(rng));

  const fs::path p = scratch_dir() / "field.pfm";
  io::write_pfm_complex(p, f);
  const ComplexField back = io::read_pfm_complex(p);
  CHECK(back.grid == g);
  for (std::size_t k = 0; k < f.samples.size(); ++k) {
    CHECK(back.samples[k].real() == doctest::Approx(f.samples[k].real()).epsilon(1e-6));
    CHECK(back.samples[k].imag() == doctest::Approx(f.samples[k].imag()).epsilon(1e-6));
  }
}

TEST_CASE("phase-mask round trip keeps entries wrapped") {
  GridSpec g{8, 8, 0.7e-6};
  PhaseMask m(g);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> dist(-kPi, kPi);
  for (double& v : m.phase) v = wrap_phase(dist(rng));

  const fs::path p = scratch_dir() / "mask.pfm";
  io::write_phase_mask(p, m);
  const PhaseMask back = io::read_phase_mask(p);
  back.validate();
  for (std::size_t k = 0; k < m.phase.size(); ++k)
    CHECK(std::abs(wrap_phase(back.phase[k] - m.phase[k])) < 1e-6);
}

TEST_CASE("intensity map round trip keeps the measured flag and weight") {
  GridSpec g{5, 5, 2e-6};
  IntensityMap m(g);
  m.measured = true;
  std::mt19937 rng(4);
  std::normal_distribution<double> dist;
  for (double& v : m.values) v = dist(rng);  // negatives allowed when measured
  for (double v : m.values) m.total_weight += v;

  const fs::path p = scratch_dir() / "intensity.pfm";
  io::write_intensity_pfm(p, m);
  const IntensityMap back = io::read_intensity_pfm(p);
  CHECK(back.measured == m.measured);
  CHECK(back.grid == g);
  for (std::size_t k = 0; k < m.values.size(); ++k)
    CHECK(back.values[k] == doctest::Approx(m.values[k]).epsilon(1e-6));
}

TEST_CASE("PNG render writes a readable grayscale image") {
  GridSpec g{16, 16, 1e-6};
  IntensityMap m(g);
  for (int j = 0; j < g.height; ++j)
    for (int i = 0; i < g.width; ++i) m.at(i, j) = static_cast<double>(i);

  const fs::path p = scratch_dir() / "render.png";
  io::write_intensity_png(p, m);
  const io::GrayImage img = io::read_png_gray(p);
  CHECK(img.width == 16);
  CHECK(img.height == 16);
  // horizontal gradient survives: left column darkest, right brightest
  CHECK(img.values[0] == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(img.values[15] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(img.values[7] < img.values[8]);
}

TEST_CASE("frame-stack round trip is byte exact") {
  FrameStack stack;
  stack.grid = GridSpec{6, 3, 1e-6};
  stack.config.frames = 4;
  stack.config.seed = 9;
  stack.counts.resize(static_cast<std::size_t>(stack.config.frames) * stack.grid.size());
  std::mt19937 rng(5);
  for (std::uint8_t& c : stack.counts) c = static_cast<std::uint8_t>(rng() & 0xFF);

  const fs::path p = scratch_dir() / "frames.u8";
  io::write_frame_stack(p, stack);
  const FrameStack back = io::read_frame_stack(p);
  CHECK(back.grid == stack.grid);
  CHECK(back.config.frames == stack.config.frames);
  CHECK(back.config.seed == stack.config.seed);
  CHECK(back.counts == stack.counts);
}

TEST_CASE("readers reject missing files") {
  const fs::path p = scratch_dir() / "does_not_exist.pfm";
  CHECK_THROWS((void)io::read_pfm(p));
  CHECK_THROWS((void)io::read_frame_stack(scratch_dir() / "missing.u8"));
}
