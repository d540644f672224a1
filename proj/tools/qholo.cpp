// Command-line pipeline: design masks, synthesize the metasurface, render
// heralded images, run polarizer sweeps, simulate detector frames, and
// compute the image metrics. Every subcommand takes a JSON config and an
// output directory and writes a manifest capturing the resolved config.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>

#include "qholo/io.hpp"
#include "qholo/pipeline.hpp"
#include "qholo/plot.hpp"

using nlohmann::json;
using namespace qholo;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 2;
constexpr int kExitNotConverged = 3;

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  json j;
  in >> j;
  return j;
}

void save_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

struct Session {
  ExperimentConfig config;
  json raw_config;
  std::filesystem::path out;

  std::filesystem::path p(const std::string& name) const { return out / name; }
};

Session open_session(const std::string& config_path, const std::string& out_override,
                     const std::string& command) {
  Session s;
  s.raw_config = load_json(config_path);
  s.config = ExperimentConfig::from_json(s.raw_config);
  s.out = out_override.empty() ? s.config.output_dir : std::filesystem::path(out_override);
  std::filesystem::create_directories(s.out);
  json manifest{{"command", command}, {"config", s.config.to_json()}};
  save_json(s.out / ("manifest_" + command + ".json"), manifest);
  return s;
}

/// Letter erased by an idler polarizer at phi_i: the one whose target
/// phase difference satisfies theta = -2*phi_i (mod 2pi).
Letter erased_letter(double phi_i) {
  Letter best = Letter::H;
  double best_err = 10.0;
  for (Letter l : kLetters) {
    const double err = std::abs(wrap_phase(letter_theta(l) + 2.0 * phi_i));
    if (err < best_err) {
      best_err = err;
      best = l;
    }
  }
  return best;
}

int angle_label(double radians) {
  return static_cast<int>(std::lround(radians * 180.0 / kPi));
}

std::string herald_stem(double phi_i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "herald_%03d", angle_label(phi_i));
  return buf;
}

/// Optional user target: amplitude PNG plus a JSON descriptor pointing at
/// a label PNG (pixel 0 = background, k = region k-1) and per-region
/// theta values in degrees. Falls back to the generated four-letter
/// target when the config has no "target" section.
TargetHologram resolve_target(const Session& s) {
  const GridSpec image_grid{s.config.source_grid.width, s.config.source_grid.height,
                            ideal_image_pitch(s.config.source_grid, s.config.optical)};
  if (!s.raw_config.contains("target")) return make_hdva_target(image_grid, s.config.target_fill);

  const json& t = s.raw_config.at("target");
  const io::GrayImage amp = io::read_png_gray(t.at("amplitude_png").get<std::string>());
  const json desc = load_json(t.at("descriptor").get<std::string>());
  const io::GrayImage labels = io::read_png_gray(desc.at("labels_png").get<std::string>());
  if (amp.width != image_grid.width || amp.height != image_grid.height ||
      labels.width != amp.width || labels.height != amp.height)
    throw ValidationError("target: image dimensions must match the configured grid");
  std::vector<double> theta_deg = desc.at("theta_deg").get<std::vector<double>>();

  TargetHologram target;
  target.grid = image_grid;
  target.amplitude.assign(image_grid.size(), 0.0);
  target.theta.assign(image_grid.size(), 0.0);
  target.regions.assign(image_grid.size(), kBackgroundLabel);
  for (std::size_t k = 0; k < image_grid.size(); ++k) {
    const int label = static_cast<int>(std::lround(labels.values[k] * 255.0));
    if (label == 0) continue;
    if (label > static_cast<int>(theta_deg.size()))
      throw ValidationError("target: label exceeds theta_deg table");
    target.regions[k] = static_cast<std::int8_t>(label - 1);
    target.theta[k] = theta_deg[static_cast<std::size_t>(label - 1)] * kPi / 180.0;
    target.amplitude[k] = amp.values[k];
  }
  target.normalize();
  target.validate();
  return target;
}

PhaseMaskPair load_masks(const Session& s) {
  PhaseMaskPair masks;
  masks.phi_L = io::read_phase_mask(s.p("phi_L.pfm"));
  masks.phi_R = io::read_phase_mask(s.p("phi_R.pfm"));
  if (masks.phi_L.grid != masks.phi_R.grid) throw ValidationError("mask grids differ");
  return masks;
}

IntensityMap phase_as_map(const PhaseMask& mask) {
  IntensityMap m;
  m.grid = mask.grid;
  m.values.reserve(mask.phase.size());
  for (double p : mask.phase) m.values.push_back(p + kPi);  // render range [0, 2pi)
  return m;
}

/// Hologram pair for the configured tier, as intensity-ready complex
/// fields plus the grid the analysis masks live on.
struct TierFields {
  ComplexField psi_L;
  ComplexField psi_R;
  GridSpec analysis_grid;  // target/image grid for maps and regions
  bool resample = false;   // physical tier: maps need resampling
};

TierFields tier_fields(const Session& s, const PhaseMaskPair& masks) {
  TierFields t;
  t.analysis_grid = GridSpec{masks.phi_L.grid.width, masks.phi_L.grid.height,
                             ideal_image_pitch(masks.phi_L.grid, s.config.optical)};
  if (s.config.tier == Tier::Ideal) {
    auto pair = ideal_holograms(masks, s.config.optical);
    t.psi_L = std::move(pair.first);
    t.psi_R = std::move(pair.second);
  } else {
    PhysicalHolograms ph = physical_holograms(masks, s.config.optical);
    if (ph.aliasing_warning)
      std::cerr << "warning: angular-spectrum transfer function undersampled\n";
    t.psi_L = std::move(ph.psi_L);
    t.psi_R = std::move(ph.psi_R);
    t.resample = true;
  }
  return t;
}

IntensityMap on_analysis_grid(const Session& s, const TierFields& t, IntensityMap map) {
  if (!t.resample) return map;
  return register_focus_image(map, t.analysis_grid, s.config.optical);
}

const char* tier_name(Tier t) { return t == Tier::Ideal ? "ideal" : "physical"; }

void write_map(const Session& s, const std::string& stem, const IntensityMap& map,
               const json& extra) {
  io::write_intensity_pfm(s.p(stem + ".pfm"), map);
  io::write_intensity_png(s.p(stem + ".png"), map);
  save_json(s.p(stem + ".meta.json"), extra);
}

int cmd_design(const std::string& config_path, const std::string& out_dir) {
  Session s = open_session(config_path, out_dir, "design");
  const TargetHologram target = resolve_target(s);

  TargetHologram gs_target = target;
  gs_target.grid = s.config.source_grid;
  const ComplexField source = uniform_source(s.config.source_grid);
  auto [masks, report] = modified_gs(gs_target, source, s.config.gs);

  io::write_phase_mask(s.p("phi_L.pfm"), masks.phi_L);
  io::write_phase_mask(s.p("phi_R.pfm"), masks.phi_R);
  io::write_intensity_png(s.p("phi_L.png"), phase_as_map(masks.phi_L), 2.0 * kPi);
  io::write_intensity_png(s.p("phi_R.png"), phase_as_map(masks.phi_R), 2.0 * kPi);

  IntensityMap target_map;
  target_map.grid = target.grid;
  for (double a : target.amplitude) target_map.values.push_back(a * a);
  io::write_intensity_pfm(s.p("target.pfm"), target_map);
  io::write_intensity_png(s.p("target.png"), target_map);

  save_json(s.p("design_report.json"),
            json{{"iterations_run", report.iterations_run},
                 {"converged", report.converged},
                 {"amplitude_error_history", report.amplitude_error_history},
                 {"phase_error_history", report.phase_error_history}});

  std::cout << "design: " << (report.converged ? "converged" : "NOT converged") << " after "
            << report.iterations_run << " iterations (amp "
            << report.amplitude_error_history.back() << ", phase "
            << report.phase_error_history.back() << ")\n";
  return report.converged ? kExitOk : kExitNotConverged;
}

int cmd_synth(const std::string& config_path, const std::string& out_dir) {
  Session s = open_session(config_path, out_dir, "synth");
  const PhaseMaskPair masks = load_masks(s);
  const MetasurfaceProfile profile = synthesize(masks, s.config.optical);

  io::write_phase_mask(s.p("profile.pfm"), profile.trl_phase);
  io::write_intensity_png(s.p("profile.png"), phase_as_map(profile.trl_phase), 2.0 * kPi);

  std::ofstream csv(s.p("rotation.csv"));
  csv << "i,j,rotation_deg\n";
  for (int j = 0; j < profile.grid.height; ++j)
    for (int i = 0; i < profile.grid.width; ++i)
      csv << i << "," << j << ","
          << profile.rotation[static_cast<std::size_t>(j) * profile.grid.width + i] * 180.0 / kPi
          << "\n";

  const double frac =
      static_cast<double>(profile.degenerate_pixels.size()) / static_cast<double>(profile.grid.size());
  save_json(s.p("profile.json"), json{{"width", profile.grid.width},
                                      {"height", profile.grid.height},
                                      {"pitch_um", profile.grid.pitch * 1e6},
                                      {"degenerate_pixels", profile.degenerate_pixels.size()},
                                      {"degenerate_fraction", frac}});
  std::cout << "synth: profile written, " << profile.degenerate_pixels.size()
            << " degenerate pixels\n";
  return kExitOk;
}

int cmd_herald(const std::string& config_path, const std::string& out_dir) {
  Session s = open_session(config_path, out_dir, "herald");
  const TierFields t = tier_fields(s, load_masks(s));

  const IntensityMap reference = on_analysis_grid(s, t, no_eraser_map(t.psi_L, t.psi_R));
  write_map(s, "herald_no_eraser", reference,
            json{{"tier", tier_name(s.config.tier)}, {"eraser", false}});

  for (double phi_i : s.config.idler_angles) {
    IntensityMap raw = heralded_map(t.psi_L, t.psi_R, phi_i);
    const double probability = raw.total_weight;
    IntensityMap map = on_analysis_grid(s, t, std::move(raw));
    write_map(s, herald_stem(phi_i), map,
              json{{"tier", tier_name(s.config.tier)},
                   {"eraser", true},
                   {"phi_i_deg", angle_label(phi_i)},
                   {"erased_letter", letter_name(erased_letter(phi_i))},
                   {"herald_probability", probability}});
  }
  std::cout << "herald: " << s.config.idler_angles.size() << " eraser maps + reference ("
            << tier_name(s.config.tier) << " tier)\n";
  return kExitOk;
}

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepSample>& samples) {
  std::ofstream csv(path);
  csv << "phi_s_degrees,I_H,I_D,I_V,I_A\n";
  for (const SweepSample& row : samples) {
    csv << row.phi_s * 180.0 / kPi;
    for (double v : row.letter_mean) csv << "," << v;
    csv << "\n";
  }
}

void plot_sweep(const std::filesystem::path& path, const std::vector<SweepSample>& samples,
                const std::array<std::optional<VisibilityFit>, 4>& fits) {
  static const std::array<std::array<std::uint8_t, 3>, 4> colors{
      {{200, 40, 40}, {40, 150, 40}, {40, 60, 200}, {160, 40, 160}}};
  std::vector<plot::Series> series;
  for (int l = 0; l < 4; ++l) {
    plot::Series pts;
    pts.color = colors[l];
    pts.markers = true;
    for (const SweepSample& row : samples) {
      pts.x.push_back(row.phi_s * 180.0 / kPi);
      pts.y.push_back(row.letter_mean[l]);
    }
    if (fits[l]) {
      plot::Series curve;
      curve.color = colors[l];
      const double half = letter_theta(static_cast<Letter>(l)) / 2.0;
      const double lo = pts.x.front() * kPi / 180.0, hi = pts.x.back() * kPi / 180.0;
      for (int k = 0; k <= 180; ++k) {
        const double phi = lo + (hi - lo) * k / 180.0;
        const double sn = std::sin(phi - half + fits[l]->delta);
        curve.x.push_back(phi * 180.0 / kPi);
        curve.y.push_back(fits[l]->amplitude * sn * sn + fits[l]->offset);
      }
      series.push_back(std::move(curve));
    }
    series.push_back(std::move(pts));
  }
  plot::render_line_plot(path, series);
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir) {
  Session s = open_session(config_path, out_dir, "sweep");
  if (s.config.signal_angles.empty())
    throw ValidationError("sweep: signal_angles_deg must be non-empty");
  const TierFields t = tier_fields(s, load_masks(s));
  const RegionMask regions = make_region_mask(resolve_target(s));

  json report;
  for (bool eraser_on : {true, false}) {
    std::vector<SweepSample> samples;
    for (double phi_s : s.config.signal_angles) {
      const IntensityMap map =
          on_analysis_grid(s, t, sweep_step_map(t.psi_L, t.psi_R, phi_s, eraser_on));
      SweepSample row;
      row.phi_s = phi_s;
      for (int l = 0; l < 4; ++l) row.letter_mean[l] = mean_over(map, regions.letter_pixels[l]);
      samples.push_back(row);
    }
    const std::string stem = eraser_on ? "sweep_on" : "sweep_off";
    write_sweep_csv(s.p(stem + ".csv"), samples);

    std::array<std::optional<VisibilityFit>, 4> fits;
    json fit_json = json::object();
    const double span = samples.back().phi_s - samples.front().phi_s;
    if (samples.size() >= 8 && span >= kPi - 1e-9) {
      for (Letter l : kLetters) {
        const VisibilityFit f = visibility_fit(samples, l);
        fits[static_cast<int>(l)] = f;
        fit_json[letter_name(l)] = json{{"amplitude", f.amplitude},
                                        {"offset", f.offset},
                                        {"delta_deg", f.delta * 180.0 / kPi},
                                        {"visibility", f.visibility}};
      }
    }
    report[stem] = json{{"samples", samples.size()}, {"fits", fit_json}};
    plot_sweep(s.p(stem + ".png"), samples, fits);
  }
  save_json(s.p("sweep_report.json"), report);
  std::cout << "sweep: " << s.config.signal_angles.size() << " angles, eraser on/off ("
            << tier_name(s.config.tier) << " tier)\n";
  return kExitOk;
}

int cmd_frames(const std::string& config_path, const std::string& out_dir) {
  Session s = open_session(config_path, out_dir, "frames");
  const std::string input = s.raw_config.value("frames_input", std::string("herald_no_eraser.pfm"));
  std::filesystem::path input_path(input);
  if (input_path.is_relative()) input_path = s.out / input_path;
  const IntensityMap drive = io::read_intensity_pfm(input_path);

  const FrameStack signal = simulate_frames(drive, s.config.spad);
  SpadConfig bg_config = s.config.spad;
  bg_config.seed = s.config.spad.seed + 1;  // independent background stream
  const FrameStack background = simulate_background(bg_config, drive.grid);
  io::write_frame_stack(s.p("frames_signal.u8"), signal);
  io::write_frame_stack(s.p("frames_background.u8"), background);

  const IntensityMap recovered = accumulate_subtract(signal, background);
  write_map(s, "recovered", recovered,
            json{{"frames", s.config.spad.frames}, {"input", input_path.string()}});
  std::cout << "frames: " << s.config.spad.frames << " frames simulated from "
            << input_path.filename().string() << "\n";
  return kExitOk;
}

int cmd_analyze(const std::string& config_path, const std::string& out_dir) {
  Session s = open_session(config_path, out_dir, "analyze");
  const RegionMask regions = make_region_mask(resolve_target(s));
  const IntensityMap reference = io::read_intensity_pfm(s.p("herald_no_eraser.pfm"));
  if (reference.grid != regions.grid)
    throw ValidationError("analyze: reference grid does not match the region masks");

  json letters = json::object();
  for (Letter l : kLetters)
    letters[letter_name(l)] = json{{"contrast_db", contrast(reference, regions, l)}};

  json erasures = json::array();
  for (double phi_i : s.config.idler_angles) {
    const IntensityMap erased_img = io::read_intensity_pfm(s.p(herald_stem(phi_i) + ".pfm"));
    const Letter gone = erased_letter(phi_i);
    const DropResult drop = intensity_drop(erased_img, reference, regions, gone);
    json remaining = json::object();
    for (Letter l : kLetters) {
      if (l == gone) continue;
      remaining[letter_name(l)] =
          pearson(erased_img, reference, letter_with_background(regions, l));
    }
    erasures.push_back(json{{"phi_i_deg", angle_label(phi_i)},
                            {"erased_letter", letter_name(gone)},
                            {"drop_db", drop.db},
                            {"drop_floored", drop.floored},
                            {"remaining_pearson", remaining}});
  }

  json report{{"letters", letters}, {"erasures", erasures}};
  if (std::filesystem::exists(s.p("recovered.pfm"))) {
    const IntensityMap recovered = io::read_intensity_pfm(s.p("recovered.pfm"));
    json rec = json::object();
    for (Letter l : kLetters)
      rec[letter_name(l)] = pearson(recovered, reference, letter_with_background(regions, l));
    report["recovered_pearson"] = rec;
  }
  save_json(s.p("metrics.json"), report);
  std::cout << "analyze: metrics written for " << s.config.idler_angles.size()
            << " eraser settings\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polarization-multiplexed hologram laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  int (*handler)(const std::string&, const std::string&) = nullptr;

  const std::vector<std::pair<const char*, int (*)(const std::string&, const std::string&)>> cmds{
      {"design", &cmd_design},   {"synth", &cmd_synth},  {"herald", &cmd_herald},
      {"sweep", &cmd_sweep},     {"frames", &cmd_frames}, {"analyze", &cmd_analyze}};
  for (const auto& [name, fn] : cmds) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON experiment config")->required();
    sub->add_option("--out", out_dir, "output directory (default: config output_dir)");
    sub->callback([&handler, fn = fn] { handler = fn; });
  }

  CLI11_PARSE(app, argc, argv);
  try {
    return handler(config_path, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}
