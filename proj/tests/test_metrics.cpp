#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qholo/metrics.hpp"
#include "qholo/target.hpp"

using namespace qholo;

namespace {

// Minimal mask: per letter one letter pixel and one background pixel on a
// 4x2 grid, so every metric reduces to hand-computable 2-3 pixel arithmetic.
RegionMask toy_mask() {
  RegionMask m;
  m.grid = GridSpec{4, 2, 1.0};
  for (int l = 0; l < 4; ++l) {
    m.letter_pixels[l] = {static_cast<std::size_t>(l)};
    m.background_pixels[l] = {static_cast<std::size_t>(4 + l)};
  }
  m.validate();
  return m;
}

IntensityMap toy_image(double letter, double background, bool measured = false) {
  IntensityMap img(GridSpec{4, 2, 1.0});
  img.measured = measured;
  for (int l = 0; l < 4; ++l) {
    img.values[l] = letter;
    img.values[4 + l] = background;
  }
  return img;
}

std::vector<SweepSample> model_samples(double A, double B, double theta, double delta,
                                       int count, Letter letter, double noise = 0.0,
                                       unsigned seed = 0) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, noise);
  std::vector<SweepSample> out;
  for (int i = 0; i < count; ++i) {
    SweepSample s;
    s.phi_s = kPi * i / (count - 1);
    const double x = std::sin(s.phi_s - theta / 2 + delta);
    s.letter_mean[static_cast<int>(letter)] = A * x * x + B + (noise > 0 ? gauss(rng) : 0.0);
    out.push_back(s);
  }
  return out;
}

}  // namespace

TEST_CASE("intensity_drop reproduces hand-computed toy values") {
  const RegionMask m = toy_mask();
  // reference: letter 12, background 2 -> I_w = 10
  const IntensityMap ref = toy_image(12.0, 2.0);
  SUBCASE("equal images give 0 dB") {
    const DropResult r = intensity_drop(ref, ref, m, Letter::H);
    CHECK(r.db == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_FALSE(r.floored);
  }
  SUBCASE("a tenth of the reference gives exactly -10 dB") {
    const IntensityMap erased = toy_image(3.0, 2.0);  // I_e = 1 = I_w / 10
    const DropResult r = intensity_drop(erased, ref, m, Letter::D);
    CHECK(r.db == doctest::Approx(-10.0).epsilon(1e-12));
    CHECK_FALSE(r.floored);
  }
  SUBCASE("vanishing erased intensity floors at -60 dB") {
    const IntensityMap erased = toy_image(2.0, 2.0);  // I_e = 0
    const DropResult r = intensity_drop(erased, ref, m, Letter::V);
    CHECK(r.db == doctest::Approx(-60.0).epsilon(1e-12));
    CHECK(r.floored);
  }
  SUBCASE("non-positive reference intensity is an error") {
    const IntensityMap flat = toy_image(2.0, 2.0);
    CHECK_THROWS_AS((void)intensity_drop(ref, flat, m, Letter::A), ValidationError);
  }
}

TEST_CASE("intensity_drop is invariant under a common rescale of both images") {
  const RegionMask m = toy_mask();
  const IntensityMap ref = toy_image(9.0, 1.0);
  const IntensityMap erased = toy_image(3.5, 1.0);
  const double base = intensity_drop(erased, ref, m, Letter::H).db;
  IntensityMap ref2 = ref, erased2 = erased;
  for (double& v : ref2.values) v *= 41.0;
  for (double& v : erased2.values) v *= 41.0;
  CHECK(intensity_drop(erased2, ref2, m, Letter::H).db == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("contrast reproduces hand-computed toy values") {
  const RegionMask m = toy_mask();
  SUBCASE("letter mean twice the background gives 0 dB") {
    CHECK(contrast(toy_image(4.0, 2.0), m, Letter::H) == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("11x background gives exactly 10 dB") {
    CHECK(contrast(toy_image(22.0, 2.0), m, Letter::D) == doctest::Approx(10.0).epsilon(1e-12));
  }
  SUBCASE("letter equal to background is degenerate") {
    CHECK_THROWS_AS((void)contrast(toy_image(2.0, 2.0), m, Letter::V), ValidationError);
  }
  SUBCASE("zero background is an error") {
    CHECK_THROWS_AS((void)contrast(toy_image(5.0, 0.0), m, Letter::A), ValidationError);
  }
}

TEST_CASE("pearson is exact on toy data and invariant under affine maps") {
  GridSpec g{4, 2, 1.0};
  IntensityMap a(g), b(g);
  a.measured = b.measured = true;
  const double va[8] = {1, 2, 3, 4, 5, 6, 7, 8};
  const double vb[8] = {2, 1, 4, 3, 8, 5, 6, 9};
  for (int k = 0; k < 8; ++k) {
    a.values[k] = va[k];
    b.values[k] = vb[k];
  }
  const std::vector<std::size_t> all = {0, 1, 2, 3, 4, 5, 6, 7};

  CHECK(pearson(a, a, all) == doctest::Approx(1.0).epsilon(1e-12));

  IntensityMap inv = a;
  for (double& v : inv.values) v = 10.0 - v;
  CHECK(pearson(a, inv, all) == doctest::Approx(-1.0).epsilon(1e-12));

  const double base = pearson(a, b, all);
  IntensityMap scaled = b;
  for (double& v : scaled.values) v = 2.5 * v + 7.0;
  CHECK(pearson(a, scaled, all) == doctest::Approx(base).epsilon(1e-12));

  IntensityMap flat(g);
  flat.measured = true;
  CHECK_THROWS_AS((void)pearson(a, flat, all), ValidationError);
  CHECK_THROWS_AS((void)pearson(a, b, {}), ValidationError);
}

TEST_CASE("letter_with_background joins the two disjoint pixel sets") {
  const RegionMask m = toy_mask();
  const std::vector<std::size_t> region = letter_with_background(m, Letter::V);
  REQUIRE(region.size() == 2);
  CHECK(region[0] == 2);
  CHECK(region[1] == 6);
}

TEST_CASE("region masks built from the canonical target partition the quadrants") {
  GridSpec g{64, 64, 1.0};
  const TargetHologram t = make_hdva_target(g);
  const RegionMask m = make_region_mask(t);
  std::size_t total = 0;
  for (int l = 0; l < 4; ++l) {
    CHECK_FALSE(m.letter_pixels[l].empty());
    CHECK_FALSE(m.background_pixels[l].empty());
    total += m.letter_pixels[l].size() + m.background_pixels[l].size();
  }
  CHECK(total == g.size());
  // letter pixels sit inside their own quadrant
  for (std::size_t k : m.letter_pixels[static_cast<int>(Letter::A)]) {
    const int i = static_cast<int>(k % g.width);
    const int j = static_cast<int>(k / g.width);
    CHECK(i >= 32);
    CHECK(j >= 32);
  }
}

TEST_CASE("visibility_fit recovers an exact sin^2 model") {
  const auto samples = model_samples(1.0, 0.0, 0.0, 0.0, 12, Letter::H);
  const VisibilityFit fit = visibility_fit(samples, Letter::H);
  CHECK(fit.amplitude == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(fit.offset) < 1e-9);
  CHECK(std::abs(fit.delta) < 1e-9);
  CHECK(fit.visibility == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("visibility follows A / (A + 2B)") {
  const auto samples = model_samples(1.0, 0.5, kPi, 0.1, 16, Letter::V);
  const VisibilityFit fit = visibility_fit(samples, Letter::V);
  CHECK(fit.visibility == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(fit.delta == doctest::Approx(0.1).epsilon(1e-9));
}

TEST_CASE("noiseless model recovery is exact to 1e-6 for every letter") {
  const double deltas[4] = {-0.4, 0.02, 0.3, 1.1};
  for (int l = 0; l < 4; ++l) {
    const Letter letter = static_cast<Letter>(l);
    const auto samples = model_samples(2.3, 0.7, letter_theta(letter), deltas[l], 13, letter);
    const VisibilityFit fit = visibility_fit(samples, letter);
    CHECK(fit.amplitude == doctest::Approx(2.3).epsilon(1e-6));
    CHECK(fit.offset == doctest::Approx(0.7).epsilon(1e-6));
    CHECK(std::abs(std::remainder(fit.delta - deltas[l], kPi)) < 1e-6);
  }
}

TEST_CASE("fits recover the published visibilities from noisy synthetic sweeps") {
  // generation parameters: per-letter visibilities and a common offset
  const double vis[4] = {0.80, 0.73, 0.62, 0.71};
  const double delta = 4.6 * kPi / 180.0;
  for (int l = 0; l < 4; ++l) {
    const Letter letter = static_cast<Letter>(l);
    const double A = 1.0;
    const double B = A * (1.0 - vis[l]) / (2.0 * vis[l]);
    // 2% of the full swing as additive Gaussian noise
    const auto samples =
        model_samples(A, B, letter_theta(letter), delta, 25, letter, 0.02 * A, 42 + l);
    const VisibilityFit fit = visibility_fit(samples, letter);
    CHECK(std::abs(fit.visibility - vis[l]) < 0.03);
    CHECK(std::abs(fit.delta - delta) < 1.0 * kPi / 180.0);
  }
}

TEST_CASE("visibility_fit enforces its sampling preconditions") {
  const auto few = model_samples(1.0, 0.0, 0.0, 0.0, 7, Letter::H);
  CHECK_THROWS_AS((void)visibility_fit(few, Letter::H), ValidationError);

  auto narrow = model_samples(1.0, 0.0, 0.0, 0.0, 12, Letter::H);
  for (auto& s : narrow) s.phi_s *= 0.4;  // span < pi
  CHECK_THROWS_AS((void)visibility_fit(narrow, Letter::H), ValidationError);

  auto degenerate = model_samples(1.0, 0.0, 0.0, 0.0, 12, Letter::H);
  for (auto& s : degenerate) s.phi_s = (&s - degenerate.data()) % 2 == 0 ? 0.0 : kPi;
  CHECK_THROWS_AS((void)visibility_fit(degenerate, Letter::H), ValidationError);
}
