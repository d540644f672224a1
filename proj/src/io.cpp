#include "qholo/io.hpp"

#include <png.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <json.hpp>

namespace qholo::io {

namespace {

using nlohmann::json;

void write_sidecar(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path.string() + ".json");
  if (!out) throw ValidationError("cannot write sidecar for " + path.string());
  out << j.dump(2) << "\n";
}

json read_sidecar(const std::filesystem::path& path) {
  std::ifstream in(path.string() + ".json");
  if (!in) throw ValidationError("missing sidecar for " + path.string());
  json j;
  in >> j;
  return j;
}

void write_pf_payload(std::ostream& out, int width, int height, const std::vector<double>& values) {
  out << "Pf\n" << width << " " << height << "\n-1.0\n";
  // PFM rows run bottom-to-top.
  std::vector<float> row(width);
  for (int j = height - 1; j >= 0; --j) {
    for (int i = 0; i < width; ++i)
      row[i] = static_cast<float>(values[static_cast<std::size_t>(j) * width + i]);
    out.write(reinterpret_cast<const char*>(row.data()), sizeof(float) * width);
  }
}

struct PfHeader {
  int width = 0;
  int height = 0;
};

PfHeader read_pf_payload(std::istream& in, std::vector<double>& values) {
  std::string magic;
  in >> magic;
  if (magic != "Pf") throw ValidationError("not a grayscale PFM payload");
  PfHeader h;
  double scale = 0.0;
  in >> h.width >> h.height >> scale;
  in.get();  // single whitespace after the scale line
  if (h.width < 1 || h.height < 1) throw ValidationError("bad PFM dimensions");
  if (scale > 0.0) throw ValidationError("big-endian PFM not supported");
  values.assign(static_cast<std::size_t>(h.width) * h.height, 0.0);
  std::vector<float> row(h.width);
  for (int j = h.height - 1; j >= 0; --j) {
    in.read(reinterpret_cast<char*>(row.data()), sizeof(float) * h.width);
    if (!in) throw ValidationError("truncated PFM payload");
    for (int i = 0; i < h.width; ++i)
      values[static_cast<std::size_t>(j) * h.width + i] = row[i];
  }
  return h;
}

struct PngCloser {
  std::FILE* f;
  ~PngCloser() {
    if (f) std::fclose(f);
  }
};

}  // namespace

void write_pfm(const std::filesystem::path& path, const GridSpec& grid,
               const std::vector<double>& values, double pitch_override) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open " + path.string());
  write_pf_payload(out, grid.width, grid.height, values);
  write_sidecar(path, {{"pitch_m", pitch_override > 0.0 ? pitch_override : grid.pitch},
                       {"planes", {"value"}}});
}

PfmGray read_pfm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  PfmGray g;
  const PfHeader h = read_pf_payload(in, g.values);
  const json j = read_sidecar(path);
  g.grid = {h.width, h.height, j.at("pitch_m").get<double>()};
  return g;
}

void write_pfm_complex(const std::filesystem::path& path, const ComplexField& field) {
  field.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open " + path.string());
  std::vector<double> plane(field.grid.size());
  for (std::size_t k = 0; k < plane.size(); ++k) plane[k] = field.samples[k].real();
  write_pf_payload(out, field.grid.width, field.grid.height, plane);
  for (std::size_t k = 0; k < plane.size(); ++k) plane[k] = field.samples[k].imag();
  write_pf_payload(out, field.grid.width, field.grid.height, plane);
  write_sidecar(path, {{"pitch_m", field.grid.pitch}, {"planes", {"real", "imag"}}});
}

ComplexField read_pfm_complex(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::vector<double> re, im;
  const PfHeader h = read_pf_payload(in, re);
  const PfHeader h2 = read_pf_payload(in, im);
  if (h.width != h2.width || h.height != h2.height)
    throw ValidationError("complex PFM planes disagree on size");
  const json j = read_sidecar(path);
  ComplexField field(GridSpec{h.width, h.height, j.at("pitch_m").get<double>()});
  for (std::size_t k = 0; k < field.samples.size(); ++k) field.samples[k] = {re[k], im[k]};
  return field;
}

void write_phase_mask(const std::filesystem::path& path, const PhaseMask& mask) {
  mask.validate();
  write_pfm(path, mask.grid, mask.phase);
}

PhaseMask read_phase_mask(const std::filesystem::path& path) {
  const PfmGray g = read_pfm(path);
  PhaseMask mask(g.grid);
  for (std::size_t k = 0; k < mask.phase.size(); ++k) mask.phase[k] = wrap_phase(g.values[k]);
  return mask;
}

void write_intensity_pfm(const std::filesystem::path& path, const IntensityMap& map) {
  map.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open " + path.string());
  write_pf_payload(out, map.grid.width, map.grid.height, map.values);
  write_sidecar(path, {{"pitch_m", map.grid.pitch},
                       {"planes", {"intensity"}},
                       {"total_weight", map.total_weight},
                       {"measured", map.measured}});
}

IntensityMap read_intensity_pfm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::vector<double> values;
  const PfHeader h = read_pf_payload(in, values);
  const json j = read_sidecar(path);
  IntensityMap map(GridSpec{h.width, h.height, j.at("pitch_m").get<double>()});
  map.values = std::move(values);
  map.measured = j.value("measured", false);
  map.total_weight = j.value("total_weight", 0.0);
  return map;
}

void write_png_rgb(const std::filesystem::path& path, int width, int height,
                   const std::vector<std::uint8_t>& rgb) {
  if (rgb.size() != static_cast<std::size_t>(width) * height * 3)
    throw ValidationError("write_png_rgb: buffer size mismatch");
  std::FILE* f = std::fopen(path.string().c_str(), "wb");
  if (!f) throw ValidationError("cannot open " + path.string());
  PngCloser closer{f};

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw ValidationError("libpng failure writing " + path.string());
  }
  png_init_io(png, f);
  png_set_IHDR(png, info, width, height, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int j = 0; j < height; ++j)
    png_write_row(png, const_cast<png_bytep>(rgb.data() + static_cast<std::size_t>(j) * width * 3));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

void write_intensity_png(const std::filesystem::path& path, const IntensityMap& map,
                         double scale_max) {
  double vmax = scale_max;
  if (vmax <= 0.0) {
    vmax = 0.0;
    for (double v : map.values) vmax = std::max(vmax, v);
    if (vmax <= 0.0) vmax = 1.0;
  }
  std::vector<std::uint8_t> rgb(static_cast<std::size_t>(map.grid.width) * map.grid.height * 3);
  for (std::size_t k = 0; k < map.values.size(); ++k) {
    const double t = std::clamp(map.values[k] / vmax, 0.0, 1.0);
    const auto g = static_cast<std::uint8_t>(std::lround(255.0 * t));
    rgb[3 * k] = rgb[3 * k + 1] = rgb[3 * k + 2] = g;
  }
  write_png_rgb(path, map.grid.width, map.grid.height, rgb);
  write_sidecar(path, {{"normalization_max", vmax}, {"pitch_m", map.grid.pitch}});
}

GrayImage read_png_gray(const std::filesystem::path& path) {
  std::FILE* f = std::fopen(path.string().c_str(), "rb");
  if (!f) throw ValidationError("cannot open " + path.string());
  PngCloser closer{f};

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw ValidationError("libpng failure reading " + path.string());
  }
  png_init_io(png, f);
  png_read_info(png, info);
  png_set_expand(png);
  png_set_strip_16(png);
  png_set_strip_alpha(png);
  png_set_rgb_to_gray(png, 1, -1.0, -1.0);
  png_read_update_info(png, info);

  GrayImage img;
  img.width = static_cast<int>(png_get_image_width(png, info));
  img.height = static_cast<int>(png_get_image_height(png, info));
  img.values.resize(static_cast<std::size_t>(img.width) * img.height);
  std::vector<std::uint8_t> row(png_get_rowbytes(png, info));
  for (int j = 0; j < img.height; ++j) {
    png_read_row(png, row.data(), nullptr);
    for (int i = 0; i < img.width; ++i)
      img.values[static_cast<std::size_t>(j) * img.width + i] = row[i] / 255.0;
  }
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

void write_frame_stack(const std::filesystem::path& path, const FrameStack& stack) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open " + path.string());
  out.write(reinterpret_cast<const char*>(stack.counts.data()),
            static_cast<std::streamsize>(stack.counts.size()));
  write_sidecar(path, {{"width", stack.grid.width},
                       {"height", stack.grid.height},
                       {"pitch_m", stack.grid.pitch},
                       {"frames", stack.config.frames},
                       {"frame_duration_s", stack.config.frame_duration},
                       {"max_count", stack.config.max_count},
                       {"gate_window_s", stack.config.gate_window},
                       {"herald_rate_hz", stack.config.herald_rate},
                       {"signal_photon_budget", stack.config.signal_photon_budget},
                       {"dark_rate", stack.config.dark_rate},
                       {"seed", stack.config.seed}});
}

FrameStack read_frame_stack(const std::filesystem::path& path) {
  const json j = read_sidecar(path);
  FrameStack stack;
  stack.grid = {j.at("width").get<int>(), j.at("height").get<int>(), j.at("pitch_m").get<double>()};
  stack.config.frames = j.at("frames").get<int>();
  stack.config.frame_duration = j.at("frame_duration_s").get<double>();
  stack.config.max_count = j.at("max_count").get<int>();
  stack.config.gate_window = j.at("gate_window_s").get<double>();
  stack.config.herald_rate = j.at("herald_rate_hz").get<double>();
  stack.config.signal_photon_budget = j.at("signal_photon_budget").get<double>();
  stack.config.dark_rate = j.at("dark_rate").get<double>();
  stack.config.seed = j.at("seed").get<std::uint64_t>();

  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  stack.counts.resize(static_cast<std::size_t>(stack.config.frames) * stack.grid.size());
  in.read(reinterpret_cast<char*>(stack.counts.data()),
          static_cast<std::streamsize>(stack.counts.size()));
  if (!in) throw ValidationError("truncated frame stack " + path.string());
  return stack;
}

}  // namespace qholo::io
