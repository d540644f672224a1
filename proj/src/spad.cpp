#include "qholo/spad.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

namespace qholo {

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Counter-based stream: each draw hashes (key, counter) so any number of
// variates can be pulled for one (seed, frame, pixel) cell without state
// shared across cells.
struct KeyedStream {
  std::uint64_t key;
  std::uint64_t ctr = 0;

  KeyedStream(std::uint64_t seed, std::uint64_t frame, std::uint64_t pixel)
      : key(mix64(mix64(seed + 0x9E3779B97F4A7C15ULL * frame) ^ (pixel * 0xD6E8FEB86659FD93ULL))) {}

  double uniform() {  // (0, 1)
    const std::uint64_t bits = mix64(key + (++ctr) * 0x9E3779B97F4A7C15ULL);
    return (static_cast<double>(bits >> 11) + 0.5) * (1.0 / 9007199254740992.0);
  }
};

// Knuth inversion for small means.
std::uint32_t poisson_small(double mean, KeyedStream& rng) {
  const double limit = std::exp(-mean);
  double prod = 1.0;
  std::uint32_t n = 0;
  for (;;) {
    prod *= rng.uniform();
    if (prod <= limit) return n;
    ++n;
  }
}

// Hormann's PTRS transformed-rejection sampler for mean >= 10.
std::uint32_t poisson_ptrs(double mean, KeyedStream& rng) {
  const double smu = std::sqrt(mean);
  const double b = 0.931 + 2.53 * smu;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  const double log_mu = std::log(mean);

  for (;;) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform();
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (k < 0.0) continue;
    if (us >= 0.07 && v <= v_r) return static_cast<std::uint32_t>(k);
    if (us < 0.013 && v > us) continue;
    if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
        k * log_mu - mean - std::lgamma(k + 1.0))
      return static_cast<std::uint32_t>(k);
  }
}

std::uint32_t poisson(double mean, KeyedStream& rng) {
  if (mean <= 0.0) return 0;
  if (mean < 10.0) return poisson_small(mean, rng);
  return poisson_ptrs(mean, rng);
}

int worker_count() {
  if (const char* env = std::getenv("QHOLO_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

FrameStack run_simulation(const GridSpec& grid, const SpadConfig& config,
                          const std::vector<double>& pixel_means) {
  FrameStack stack;
  stack.grid = grid;
  stack.config = config;
  const std::size_t npix = grid.size();
  stack.counts.assign(static_cast<std::size_t>(config.frames) * npix, 0);

  const double dark = config.dark_rate;
  const int max_count = config.max_count;
  const std::uint64_t seed = config.seed;

  auto run_frames = [&](int f0, int f1) {
    for (int f = f0; f < f1; ++f) {
      std::uint8_t* frame = stack.counts.data() + static_cast<std::size_t>(f) * npix;
      for (std::size_t p = 0; p < npix; ++p) {
        const double mean = (pixel_means.empty() ? 0.0 : pixel_means[p]) + dark;
        KeyedStream rng(seed, static_cast<std::uint64_t>(f), p);
        const std::uint32_t n = poisson(mean, rng);
        frame[p] = static_cast<std::uint8_t>(
            std::min(n, static_cast<std::uint32_t>(max_count)));
      }
    }
  };

  const int workers = std::min(worker_count(), config.frames);
  if (workers <= 1) {
    run_frames(0, config.frames);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (config.frames + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const int f0 = w * chunk;
      const int f1 = std::min(config.frames, f0 + chunk);
      if (f0 < f1) pool.emplace_back(run_frames, f0, f1);
    }
    for (std::thread& t : pool) t.join();
  }
  return stack;
}

}  // namespace

std::uint32_t poisson_draw(double mean, std::uint64_t seed, std::uint64_t frame, std::uint64_t pixel) {
  KeyedStream rng(seed, frame, pixel);
  return poisson(mean, rng);
}

FrameStack simulate_frames(const IntensityMap& intensity, const SpadConfig& config) {
  intensity.validate();
  config.validate();

  double total = 0.0;
  for (double v : intensity.values) total += v;
  std::vector<double> means;
  if (config.signal_photon_budget > 0.0) {
    if (!(total > 0.0))
      throw ValidationError("simulate_frames: zero-total intensity with nonzero photon budget");
    means.resize(intensity.values.size());
    const double scale = config.signal_photon_budget / total;
    for (std::size_t k = 0; k < means.size(); ++k) means[k] = intensity.values[k] * scale;
  }
  return run_simulation(intensity.grid, config, means);
}

FrameStack simulate_background(const SpadConfig& config, const GridSpec& grid) {
  config.validate();
  grid.validate();
  SpadConfig bg = config;
  bg.signal_photon_budget = 0.0;
  return run_simulation(grid, bg, {});
}

IntensityMap accumulate_subtract(const FrameStack& signal, const FrameStack& background) {
  if (signal.grid != background.grid || signal.config.frames != background.config.frames)
    throw ValidationError("accumulate_subtract: stacks have mismatched shape");

  IntensityMap map(signal.grid);
  map.measured = true;
  const std::size_t npix = signal.grid.size();
  for (int f = 0; f < signal.config.frames; ++f) {
    const std::uint8_t* s = signal.counts.data() + static_cast<std::size_t>(f) * npix;
    const std::uint8_t* b = background.counts.data() + static_cast<std::size_t>(f) * npix;
    for (std::size_t p = 0; p < npix; ++p)
      map.values[p] += static_cast<double>(s[p]) - static_cast<double>(b[p]);
  }
  for (double v : map.values) map.total_weight += v;
  return map;
}

}  // namespace qholo
