#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "hbtdit/beamstats.hpp"
#include "hbtdit/coincidence.hpp"
#include "hbtdit/config.hpp"
#include "hbtdit/decoherence.hpp"
#include "hbtdit/errors.hpp"
#include "hbtdit/propagation.hpp"
#include "hbtdit/scenarios.hpp"

namespace py = pybind11;
using namespace hbtdit;

namespace {

template <class T>
py::array_t<T> to_array(const std::vector<T>& v) {
  return py::array_t<T>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::dict spectrum_dict(const DelaySpectrum& d) {
  py::dict out;
  out["delays"] = to_array(d.delays);
  out["density"] = to_array(d.density);
  out["scale"] = d.scale;
  out["label"] = to_string(d.label);
  return out;
}

py::array_t<std::complex<double>> matrix_array(const DensityMatrix& rho) {
  const auto n = static_cast<py::ssize_t>(rho.dim());
  py::array_t<std::complex<double>> out({n, n});
  auto m = out.mutable_unchecked<2>();
  for (py::ssize_t i = 0; i < n; ++i)
    for (py::ssize_t j = 0; j < n; ++j) m(i, j) = rho(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  return out;
}

std::vector<std::string> basis_labels(const Basis& b) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < b.dim(); ++i) out.push_back(b.label(i));
  return out;
}

py::dict matrix_dict(const ExactDensity& rho) {
  py::dict out;
  out["matrix"] = matrix_array(to_density_matrix(rho));
  out["labels"] = basis_labels(rho.basis);
  return out;
}

SourceSpec make_source(double t_c_fs, double t_pulse_fs, const PhysicalParams& params) {
  SourceSpec s;
  s.coherence_time = t_c_fs * constants::fs;
  s.pulse_duration = t_pulse_fs * constants::fs;
  s.params = params;
  return s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native core of hbtdit";

  static py::exception<ConvergenceError> convergence_error(m, "ConvergenceError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const IoError& e) {
      PyErr_SetString(PyExc_OSError, e.what());
    } catch (const ConvergenceError& e) {
      convergence_error(e.what());
    }
  });

  py::class_<PhysicalParams>(m, "PhysicalParams")
      .def(py::init<>())
      .def_static("electron", &PhysicalParams::electron, py::arg("distance"), py::arg("flight_time"),
                  py::arg("mass_multiplier") = 1.0)
      .def_readwrite("mass", &PhysicalParams::mass)
      .def_readwrite("hbar", &PhysicalParams::hbar)
      .def_readwrite("distance", &PhysicalParams::distance)
      .def_readwrite("flight_time", &PhysicalParams::flight_time)
      .def("validate", &PhysicalParams::validate)
      .def("__repr__", [](const PhysicalParams& p) {
        return "PhysicalParams(mass=" + std::to_string(p.mass) + ", distance=" + std::to_string(p.distance) +
               ", flight_time=" + std::to_string(p.flight_time) + ")";
      });

  py::class_<DetectionGrid>(m, "DetectionGrid")
      .def(py::init([](double lo, double hi, std::size_t n) {
             DetectionGrid g{lo, hi, n};
             g.validate();
             return g;
           }),
           py::arg("t_min"), py::arg("t_max"), py::arg("n_points"))
      .def_readonly("t_min", &DetectionGrid::t_min)
      .def_readonly("t_max", &DetectionGrid::t_max)
      .def_readonly("n_points", &DetectionGrid::n_points)
      .def("spacing", &DetectionGrid::spacing)
      .def("times", [](const DetectionGrid& g) { return to_array(g.times()); });

  m.def("source_frequency", &source_frequency, py::arg("params"));
  m.def("free_kernel", &free_kernel, py::arg("t_i"), py::arg("t_f"), py::arg("params"));
  m.def("kinetic_energy_ev", &kinetic_energy_ev, py::arg("params"));
  m.def(
      "first_zero_times",
      [](double a, const PhysicalParams& p) {
        const auto z = first_zero_times(a, p);
        return py::make_tuple(z.leading ? py::cast(*z.leading) : py::none(), z.trailing);
      },
      py::arg("a"), py::arg("params"), "(leading or None, trailing) first-zero times.");
  m.def("default_detection_grid", &default_detection_grid, py::arg("a"), py::arg("params"),
        py::arg("n_points") = 2001);
  m.def(
      "slit_amplitude",
      [](double start, double duration, const DetectionGrid& grid, const PhysicalParams& p, bool normalize) {
        auto trace = slit_amplitude({start, duration}, grid, p);
        if (normalize) trace = normalize_trace(trace);
        return to_array(trace.values);
      },
      py::arg("start"), py::arg("duration"), py::arg("grid"), py::arg("params"), py::arg("normalize") = false);
  m.def(
      "multi_slit_spectrum",
      [](const std::vector<std::pair<double, double>>& slits, bool coherent, const DetectionGrid& grid,
         const PhysicalParams& p) {
        std::vector<TemporalSlit> s;
        for (const auto& [start, duration] : slits) s.push_back({start, duration});
        return to_array(
            multi_slit_spectrum(s, coherent ? Superposition::coherent : Superposition::incoherent, grid, p).density);
      },
      py::arg("slits"), py::arg("coherent"), py::arg("grid"), py::arg("params"),
      "Slits as (start, duration) pairs in seconds.");

  m.def("interval_count", [](double tc, double tp) { return interval_count(tc, tp).n; }, py::arg("coherence_time"),
        py::arg("pulse_duration"));
  m.def(
      "contrast_analytic",
      [](int n, const std::string& pol) { return contrast_analytic(n, parse_polarization(pol)); }, py::arg("n"),
      py::arg("polarization") = "unpolarized");
  m.def(
      "delta_p",
      [](double tc, double tp, double p0, const std::string& pol) {
        return delta_p(tc, tp, p0, parse_polarization(pol));
      },
      py::arg("coherence_time"), py::arg("pulse_duration"), py::arg("p_incoh0"),
      py::arg("polarization") = "unpolarized");
  m.def("reduced_rate", &reduced_rate, py::arg("delta_p"), py::arg("window"), py::arg("rep_rate"));

  m.def(
      "mixture_spectrum",
      [](double t_c_fs, double t_pulse_fs, const PhysicalParams& p, const std::string& pol, const std::string& mode,
         bool exact, std::size_t grid_points) {
        const auto src = make_source(t_c_fs, t_pulse_fs, p);
        MixtureOptions opt;
        opt.mode = parse_reduction(mode);
        opt.grid = default_detection_grid(src.slot(), p, grid_points);
        const auto polarization = parse_polarization(pol);
        const auto r = exact ? exact_mixture_spectrum(src, polarization, opt) : mixture_spectrum(src, polarization, opt);
        py::dict out;
        out["n_intervals"] = r.n_intervals;
        out["mixture"] = spectrum_dict(r.mixture);
        out["coh_S"] = spectrum_dict(r.coh_S);
        out["coh_AS"] = spectrum_dict(r.coh_AS);
        out["incoh"] = spectrum_dict(r.incoh);
        out["contrast"] = numeric_contrast(r.mixture, r.incoh);
        return out;
      },
      py::arg("t_c_fs"), py::arg("t_pulse_fs"), py::arg("params"), py::arg("polarization") = "unpolarized",
      py::arg("mode") = "marginal", py::arg("exact") = false, py::arg("grid_points") = 2001);

  m.def(
      "decoherence_outputs",
      [](int n) {
        const auto o = decoherence_outputs(n);
        py::dict out;
        out["pair_spin"] = matrix_dict(o.pair_spin);
        out["pair"] = matrix_dict(o.pair);
        out["single"] = matrix_dict(o.single);
        return out;
      },
      py::arg("n_intervals") = 3);

  m.def(
      "resolved_config",
      [](const std::string& text) { return resolved_config_json(parse_config(text), true); },
      py::arg("json_text") = "{}");
  m.def(
      "run_scenario",
      [](const std::string& text) {
        std::vector<std::string> files;
        for (const auto& f : run_scenario(parse_config(text)).files) files.push_back(f.string());
        return files;
      },
      py::arg("json_text"), "Run a scenario from its JSON configuration; returns the written paths.");
}
