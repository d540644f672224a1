// Python bindings: numpy-centric wrappers around the core operations.
// Fields cross the boundary as 2-D arrays (complex128 for fields, float64
// for phases/intensities) plus an explicit pitch where geometry matters.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qholo/field_ops.hpp"
#include "qholo/pipeline.hpp"

namespace py = pybind11;
using namespace qholo;

namespace {

GridSpec grid_of(const py::array& a, double pitch) {
  if (a.ndim() != 2) throw ValidationError("expected a 2-D array");
  return GridSpec{static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)), pitch};
}

ComplexField to_field(const py::array_t<std::complex<double>>& a, double pitch) {
  ComplexField f(grid_of(a, pitch));
  auto r = a.unchecked<2>();
  for (py::ssize_t j = 0; j < r.shape(0); ++j)
    for (py::ssize_t i = 0; i < r.shape(1); ++i)
      f.samples[static_cast<std::size_t>(j) * r.shape(1) + i] = r(j, i);
  return f;
}

py::array_t<std::complex<double>> from_field(const ComplexField& f) {
  py::array_t<std::complex<double>> a({f.grid.height, f.grid.width});
  auto w = a.mutable_unchecked<2>();
  for (int j = 0; j < f.grid.height; ++j)
    for (int i = 0; i < f.grid.width; ++i)
      w(j, i) = f.samples[static_cast<std::size_t>(j) * f.grid.width + i];
  return a;
}

PhaseMask to_mask(const py::array_t<double>& a, double pitch) {
  PhaseMask m(grid_of(a, pitch));
  auto r = a.unchecked<2>();
  for (py::ssize_t j = 0; j < r.shape(0); ++j)
    for (py::ssize_t i = 0; i < r.shape(1); ++i)
      m.phase[static_cast<std::size_t>(j) * r.shape(1) + i] = wrap_phase(r(j, i));
  return m;
}

py::array_t<double> from_vec(const GridSpec& g, const std::vector<double>& v) {
  py::array_t<double> a({g.height, g.width});
  auto w = a.mutable_unchecked<2>();
  for (int j = 0; j < g.height; ++j)
    for (int i = 0; i < g.width; ++i) w(j, i) = v[static_cast<std::size_t>(j) * g.width + i];
  return a;
}

IntensityMap to_map(const py::array_t<double>& a, double pitch) {
  IntensityMap m(grid_of(a, pitch));
  auto r = a.unchecked<2>();
  for (py::ssize_t j = 0; j < r.shape(0); ++j)
    for (py::ssize_t i = 0; i < r.shape(1); ++i)
      m.values[static_cast<std::size_t>(j) * r.shape(1) + i] = r(j, i);
  for (double v : m.values) m.total_weight += v;
  return m;
}

Letter to_letter(const std::string& name) {
  for (Letter l : kLetters)
    if (name == letter_name(l)) return l;
  throw ValidationError("letter must be one of H, D, V, A");
}

}  // namespace

PYBIND11_MODULE(_qholo, m) {
  m.doc() = "polarization-multiplexed hologram laboratory (core bindings)";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);

  py::class_<TargetHologram>(m, "TargetHologram")
      .def_property_readonly("pitch", [](const TargetHologram& t) { return t.grid.pitch; })
      .def_property_readonly("amplitude",
                             [](const TargetHologram& t) { return from_vec(t.grid, t.amplitude); })
      .def_property_readonly("theta",
                             [](const TargetHologram& t) { return from_vec(t.grid, t.theta); })
      .def_property_readonly("regions", [](const TargetHologram& t) {
        py::array_t<std::int8_t> a({t.grid.height, t.grid.width});
        auto w = a.mutable_unchecked<2>();
        for (int j = 0; j < t.grid.height; ++j)
          for (int i = 0; i < t.grid.width; ++i)
            w(j, i) = t.regions[static_cast<std::size_t>(j) * t.grid.width + i];
        return a;
      });

  m.def("make_hdva_target",
        [](int n, double pitch, double fill) {
          return make_hdva_target(GridSpec{n, n, pitch}, fill);
        },
        py::arg("n"), py::arg("pitch") = 1.0, py::arg("fill") = 0.6);

  m.def("dft2", [](const py::array_t<std::complex<double>>& a) {
    return from_field(dft2(to_field(a, 1.0)));
  });
  m.def("idft2", [](const py::array_t<std::complex<double>>& a) {
    return from_field(idft2(to_field(a, 1.0)));
  });

  m.def("lens_phase",
        [](int n, double pitch, double focal_length, double wavelength, bool converging) {
          const PhaseMask p = lens_phase(GridSpec{n, n, pitch}, focal_length, wavelength,
                                         converging ? LensKind::Converging : LensKind::Diverging);
          return from_vec(p.grid, p.phase);
        },
        py::arg("n"), py::arg("pitch"), py::arg("focal_length"), py::arg("wavelength"),
        py::arg("converging") = true);

  m.def("propagate",
        [](const py::array_t<std::complex<double>>& a, double pitch, double distance,
           double wavelength) {
          PropagationResult r = propagate(to_field(a, pitch), distance, wavelength);
          return py::make_tuple(from_field(r.field), r.aliasing_warning);
        },
        py::arg("field"), py::arg("pitch"), py::arg("distance"), py::arg("wavelength"));

  m.def("modified_gs",
        [](const TargetHologram& target, int max_iterations, double amp_tolerance,
           double phase_tolerance, std::uint64_t seed, double relaxation) {
          GsOptions opt;
          opt.max_iterations = max_iterations;
          opt.amp_tolerance = amp_tolerance;
          opt.phase_tolerance = phase_tolerance;
          opt.seed = seed;
          opt.relaxation = relaxation;
          auto [masks, report] = modified_gs(target, uniform_source(target.grid), opt);
          py::dict rep;
          rep["iterations_run"] = report.iterations_run;
          rep["converged"] = report.converged;
          rep["amplitude_error_history"] = report.amplitude_error_history;
          rep["phase_error_history"] = report.phase_error_history;
          return py::make_tuple(from_vec(masks.phi_L.grid, masks.phi_L.phase),
                                from_vec(masks.phi_R.grid, masks.phi_R.phase), rep);
        },
        py::arg("target"), py::arg("max_iterations") = 200, py::arg("amp_tolerance") = 0.05,
        py::arg("phase_tolerance") = 0.05, py::arg("seed") = 0, py::arg("relaxation") = 0.85);

  m.def("reconstruct",
        [](const py::array_t<double>& phi) {
          const PhaseMask mask = to_mask(phi, 1.0);
          return from_field(reconstruct(mask, uniform_source(mask.grid)));
        },
        py::arg("phi"), "Ideal-tier hologram of one mask over the uniform source.");

  m.def("synthesize",
        [](const py::array_t<double>& phi_L, const py::array_t<double>& phi_R, double pitch,
           double wavelength, double focal_length) {
          PhaseMaskPair masks{to_mask(phi_L, pitch), to_mask(phi_R, pitch)};
          OpticalConfig cfg;
          cfg.wavelength = wavelength;
          cfg.focal_length = focal_length;
          const MetasurfaceProfile p = synthesize(masks, cfg);
          return py::make_tuple(from_vec(p.grid, p.trl_phase.phase), from_vec(p.grid, p.rotation),
                                p.degenerate_pixels.size());
        },
        py::arg("phi_L"), py::arg("phi_R"), py::arg("pitch") = 0.7e-6,
        py::arg("wavelength") = 810e-9, py::arg("focal_length") = 1000e-6);

  m.def("heralded_map",
        [](const py::array_t<std::complex<double>>& psi_L,
           const py::array_t<std::complex<double>>& psi_R, double phi_i) {
          const IntensityMap map = heralded_map(to_field(psi_L, 1.0), to_field(psi_R, 1.0), phi_i);
          return py::make_tuple(from_vec(map.grid, map.values), map.total_weight);
        },
        py::arg("psi_L"), py::arg("psi_R"), py::arg("phi_i"),
        "Heralded signal intensity for an idler polarizer angle; returns (map, probability).");

  m.def("no_eraser_map",
        [](const py::array_t<std::complex<double>>& psi_L,
           const py::array_t<std::complex<double>>& psi_R) {
          const IntensityMap map = no_eraser_map(to_field(psi_L, 1.0), to_field(psi_R, 1.0));
          return from_vec(map.grid, map.values);
        },
        py::arg("psi_L"), py::arg("psi_R"));

  m.def("sweep_step_map",
        [](const py::array_t<std::complex<double>>& psi_L,
           const py::array_t<std::complex<double>>& psi_R, double phi_s, bool eraser_on) {
          const IntensityMap map =
              sweep_step_map(to_field(psi_L, 1.0), to_field(psi_R, 1.0), phi_s, eraser_on);
          return from_vec(map.grid, map.values);
        },
        py::arg("psi_L"), py::arg("psi_R"), py::arg("phi_s"), py::arg("eraser_on") = true);

  m.def("letter_means",
        [](const py::array_t<double>& img, const TargetHologram& target, double pitch) {
          const RegionMask rm = make_region_mask(target);
          const IntensityMap map = to_map(img, pitch);
          py::dict out;
          for (Letter l : kLetters)
            out[letter_name(l)] = mean_over(map, rm.letter_pixels[static_cast<int>(l)]);
          return out;
        },
        py::arg("img"), py::arg("target"), py::arg("pitch") = 1.0);

  m.def("intensity_drop",
        [](const py::array_t<double>& erased, const py::array_t<double>& reference,
           const TargetHologram& target, const std::string& letter, double pitch) {
          const RegionMask rm = make_region_mask(target);
          const DropResult d =
              intensity_drop(to_map(erased, pitch), to_map(reference, pitch), rm, to_letter(letter));
          return py::make_tuple(d.db, d.floored);
        },
        py::arg("erased"), py::arg("reference"), py::arg("target"), py::arg("letter"),
        py::arg("pitch") = 1.0);

  m.def("contrast",
        [](const py::array_t<double>& img, const TargetHologram& target, const std::string& letter,
           double pitch) {
          return contrast(to_map(img, pitch), make_region_mask(target), to_letter(letter));
        },
        py::arg("img"), py::arg("target"), py::arg("letter"), py::arg("pitch") = 1.0);

  m.def("pearson",
        [](const py::array_t<double>& a, const py::array_t<double>& b,
           const TargetHologram& target, const std::string& letter, double pitch) {
          const RegionMask rm = make_region_mask(target);
          return pearson(to_map(a, pitch), to_map(b, pitch),
                         letter_with_background(rm, to_letter(letter)));
        },
        py::arg("a"), py::arg("b"), py::arg("target"), py::arg("letter"), py::arg("pitch") = 1.0);

  m.def("visibility_fit",
        [](const std::vector<double>& phi_s, const std::vector<std::array<double, 4>>& means,
           const std::string& letter) {
          if (phi_s.size() != means.size())
            throw ValidationError("visibility_fit: angle/mean length mismatch");
          std::vector<SweepSample> samples;
          for (std::size_t k = 0; k < phi_s.size(); ++k)
            samples.push_back(SweepSample{phi_s[k], means[k]});
          const VisibilityFit f = visibility_fit(samples, to_letter(letter));
          py::dict out;
          out["amplitude"] = f.amplitude;
          out["offset"] = f.offset;
          out["delta"] = f.delta;
          out["visibility"] = f.visibility;
          return out;
        },
        py::arg("phi_s"), py::arg("letter_means"), py::arg("letter"));

  m.def("simulate_frames",
        [](const py::array_t<double>& intensity, int frames, double budget, double dark_rate,
           std::uint64_t seed, int max_count) {
          SpadConfig cfg;
          cfg.frames = frames;
          cfg.signal_photon_budget = budget;
          cfg.dark_rate = dark_rate;
          cfg.seed = seed;
          cfg.max_count = max_count;
          const FrameStack stack = simulate_frames(to_map(intensity, 1.0), cfg);
          py::array_t<std::uint8_t> a({frames, stack.grid.height, stack.grid.width});
          std::memcpy(a.mutable_data(), stack.counts.data(), stack.counts.size());
          return a;
        },
        py::arg("intensity"), py::arg("frames") = 600, py::arg("budget") = 20000.0,
        py::arg("dark_rate") = 0.05, py::arg("seed") = 1, py::arg("max_count") = 255);

  m.def("poisson_draw", &poisson_draw, py::arg("mean"), py::arg("seed"), py::arg("frame"),
        py::arg("pixel"));

  m.def("ideal_image_pitch",
        [](int n, double pitch, double wavelength, double focal_length) {
          OpticalConfig cfg;
          cfg.wavelength = wavelength;
          cfg.focal_length = focal_length;
          return ideal_image_pitch(GridSpec{n, n, pitch}, cfg);
        },
        py::arg("n"), py::arg("pitch") = 0.7e-6, py::arg("wavelength") = 810e-9,
        py::arg("focal_length") = 1000e-6);
}
