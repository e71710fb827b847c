#include "hbtdit/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

#include "hbtdit/errors.hpp"
#include "hbtdit/log.hpp"
#include "hbtdit/numerics.hpp"

#ifndef HBTDIT_VERSION
#define HBTDIT_VERSION "0.0.0"
#endif

namespace hbtdit {
namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::vector<std::string> header(const ScenarioConfig& config, const std::string& scenario) {
  return {std::string("hbtdit ") + HBTDIT_VERSION, "scenario: " + scenario,
          "config: " + resolved_config_json(config)};
}

double slot_of(const ScenarioConfig& config) { return 0.5 * config.t_c_fs * constants::fs; }

double slit_of(const ScenarioConfig& config) {
  return config.slit_fs ? *config.slit_fs * constants::fs : slot_of(config);
}

struct Components {
  DelaySpectrum coh_S, coh_AS, incoh;
};

Components representative_components(const ScenarioConfig& config) {
  const auto source = config.source();
  const auto p = source.params;
  const auto grid = config.grid_for_slit(source.slot(), p);
  const auto mode = config.reduction_mode();
  const double T = p.flight_time;
  const auto phi1 = slot_amplitude(source, 0, grid, config.quad);
  const auto phi2 = slot_amplitude(source, 1, grid, config.quad);
  const auto phi3 = slot_amplitude(source, 2, grid, config.quad);
  return {pair_delay_spectrum(phi1, phi2, SymmetryClass::symmetric, mode, T),
          pair_delay_spectrum(phi1, phi2, SymmetryClass::antisymmetric, mode, T),
          pair_delay_spectrum(phi1, phi3, SymmetryClass::product, mode, T)};
}

SourceSpec source_with_pulse(const ScenarioConfig& config, double t_pulse_fs) {
  auto s = config.source();
  s.pulse_duration = t_pulse_fs * constants::fs;
  return s;
}

bool use_exact(const ScenarioConfig& config, int n) {
  if (!config.exact_pairs) return false;
  if (n <= config.exact_cap) return true;
  warn("N = " + std::to_string(n) + " exceeds exact_cap; using the representative-pair mixture");
  return false;
}

MixtureResult mixture_for(const ScenarioConfig& config, double t_pulse_fs, const Components& rep,
                          Polarization pol) {
  const auto source = source_with_pulse(config, t_pulse_fs);
  const int n = source.intervals().n;
  if (use_exact(config, n)) {
    MixtureOptions opt;
    opt.mode = config.reduction_mode();
    opt.quad = config.quad;
    opt.grid = config.grid_for_slit(source.slot(), source.params);
    opt.exact_cap = config.exact_cap;
    return exact_mixture_spectrum(source, pol, opt);
  }
  return assemble_mixture(rep.coh_S, rep.coh_AS, rep.incoh, n, pol);
}

double refined_minimum(const std::vector<double>& y, const DetectionGrid& grid, std::size_t i) {
  return grid.at(i) + numerics::parabolic_offset(y[i - 1], y[i], y[i + 1]) * grid.spacing();
}

std::optional<double> minimum_near(const std::vector<double>& y, const DetectionGrid& grid, double target) {
  const auto minima = numerics::local_minima(y);
  if (minima.empty()) return std::nullopt;
  std::size_t best = minima.front();
  for (auto i : minima)
    if (std::abs(grid.at(i) - target) < std::abs(grid.at(best) - target)) best = i;
  return refined_minimum(y, grid, best);
}

std::string cell(const std::complex<double>& z) {
  return "\"" + format_number(z.real()) + "," + format_number(z.imag()) + "\"";
}

}  // namespace

std::string canonical_scenario(const std::string& name) {
  static const std::map<std::string, std::string> names = {
      {"hbt", "hbt"},          {"figure2", "hbt"},
      {"contrast", "contrast"}, {"table1", "contrast"},
      {"energy-sweep", "energy-sweep"}, {"figure3", "energy-sweep"},
      {"dit", "dit"},          {"figure5", "dit"},           {"figure6", "dit"}, {"figure7", "dit"},
      {"error-table", "error-table"}, {"table2", "error-table"},
      {"rates", "rates"},
      {"decohere", "decohere"},
  };
  const auto it = names.find(name);
  if (it == names.end()) throw ParseError("scenario", "unknown scenario '" + name + "'");
  return it->second;
}

CsvTable hbt_table(const ScenarioConfig& config) {
  const auto rep = representative_components(config);
  std::vector<MixtureResult> sym, anti;
  CsvTable t;
  t.columns = {"tau_ns", "P_incoh"};
  for (double tp : config.pulse_durations_fs) {
    anti.push_back(mixture_for(config, tp, rep, Polarization::polarized));
    sym.push_back(mixture_for(config, tp, rep, Polarization::unpolarized));
    const std::string suffix = "_" + short_number(tp) + "fs";
    t.columns.push_back("P_S" + suffix);
    t.columns.push_back("P_AS" + suffix);
    t.columns.push_back("P_unpol" + suffix);
  }
  for (std::size_t k = 0; k < rep.incoh.delays.size(); ++k) {
    std::vector<double> row = {rep.incoh.delays[k] / constants::ns, rep.incoh.density[k]};
    for (std::size_t d = 0; d < config.pulse_durations_fs.size(); ++d) {
      const auto& w = anti[d].weights;
      const auto& m = anti[d];
      // Spatially symmetric pairs only (spin singlet throughout).
      row.push_back(w.coherent * m.coh_S.density[k] + w.incoherent * m.incoh.density[k]);
      row.push_back(m.mixture.density[k]);
      row.push_back(sym[d].mixture.density[k]);
    }
    t.add_row(std::move(row));
  }
  return t;
}

CsvTable contrast_table(const ScenarioConfig& config) {
  const auto rep = representative_components(config);
  const double window = config.window_ps * constants::ps;
  const double f = config.rep_rate_mhz * 1e6;
  const double tc = config.t_c_fs * constants::fs;
  CsvTable t;
  t.columns = {"t_pulse_fs",      "n_intervals",      "c_pol_analytic",     "c_unpol_analytic",
               "ratio_analytic",  "c_pol_numeric",    "c_unpol_numeric",    "p_incoh0",
               "delta_p_unpol",   "delta_r_unpol_cps", "delta_r_pol_cps"};
  for (double tp : config.pulse_durations_fs) {
    const auto pol = mixture_for(config, tp, rep, Polarization::polarized);
    const auto unpol = mixture_for(config, tp, rep, Polarization::unpolarized);
    const int n = pol.n_intervals;
    const double cp = contrast_analytic(n, Polarization::polarized);
    const double cu = contrast_analytic(n, Polarization::unpolarized);
    const double p0 = config.p_incoh0 ? *config.p_incoh0 : pol.incoh.shared_at_zero();
    const double tpulse = tp * constants::fs;
    const double dpu = delta_p(tc, tpulse, p0, Polarization::unpolarized);
    const double dpp = delta_p(tc, tpulse, p0, Polarization::polarized);
    t.add_row({tp, static_cast<double>(n), cp, cu, cp / cu, numeric_contrast(pol.mixture, pol.incoh),
               numeric_contrast(unpol.mixture, unpol.incoh), p0, dpu, reduced_rate(dpu, window, f),
               reduced_rate(dpp, window, f)});
  }
  return t;
}

FirstZeros simulated_first_zeros(const AmplitudeTrace& trace, double a, const PhysicalParams& params) {
  const auto predicted = first_zero_times(a, params);
  const auto y = trace.intensity();
  FirstZeros out;
  const auto trailing = minimum_near(y, trace.grid, predicted.trailing);
  if (!trailing) throw DegenerateInputError("no minimum of the diffraction pattern inside the window");
  out.trailing = *trailing;
  if (predicted.leading) out.leading = minimum_near(y, trace.grid, *predicted.leading);
  return out;
}

double central_fringe_period(const SpectrumTrace& spectrum, double centre) {
  const auto& y = spectrum.density;
  const auto minima = numerics::local_minima(y);
  std::optional<std::size_t> left, right;
  for (auto i : minima) {
    const double t = spectrum.grid.at(i);
    if (t < centre) left = i;
    if (t > centre && !right) right = i;
  }
  if (!left || !right) throw DegenerateInputError("no fringe minimum on one side of the centre");
  return refined_minimum(y, spectrum.grid, *right) - refined_minimum(y, spectrum.grid, *left);
}

DitTables dit_tables(const ScenarioConfig& config) {
  const auto p = config.params();
  const double a = slit_of(config);
  const double gap = config.slit_gap_fs ? *config.slit_gap_fs * constants::fs : a;
  const auto grid = config.grid_for_slit(a, p);
  const auto times = grid.times();
  DitTables out;

  const TemporalSlit one[] = {{0.0, a}};
  const auto single = multi_slit_spectrum(one, Superposition::coherent, grid, p, config.quad);
  out.single.columns = {"t_ns", "density"};
  for (std::size_t i = 0; i < times.size(); ++i) out.single.add_row({times[i] / constants::ns, single.density[i]});

  const TemporalSlit two[] = {{0.0, a}, {a + gap, a}};
  const auto coh = multi_slit_spectrum(two, Superposition::coherent, grid, p, config.quad);
  const auto inc = multi_slit_spectrum(two, Superposition::incoherent, grid, p, config.quad);
  out.double_slit.columns = {"t_ns", "coherent", "incoherent"};
  for (std::size_t i = 0; i < times.size(); ++i)
    out.double_slit.add_row({times[i] / constants::ns, coh.density[i], inc.density[i]});

  const auto p2 = PhysicalParams::electron(p.distance, p.flight_time, 2.0 * config.mass_multiplier);
  const auto coh2 = multi_slit_spectrum(two, Superposition::coherent, grid, p2, config.quad);
  out.boson.columns = {"t_ns", "coherent_m", "coherent_2m"};
  for (std::size_t i = 0; i < times.size(); ++i)
    out.boson.add_row({times[i] / constants::ns, coh.density[i], coh2.density[i]});

  const double period_m = central_fringe_period(coh, p.flight_time);
  const double period_2m = central_fringe_period(coh2, p.flight_time);
  out.zeros.columns = {"slit_fs",           "t_trail_pred_ns",   "t_trail_sim_ns",  "t_lead_pred_ns",
                       "t_lead_sim_ns",     "phase_trail_rad",   "phase_lead_rad",  "fringe_period_m_ns",
                       "fringe_period_2m_ns"};
  for (double scale : {0.5, 1.0, 2.0}) {
    const double w = scale * a;
    const auto g = config.grid_for_slit(w, p);
    const auto trace = slit_amplitude({0.0, w}, g, p, config.quad);
    const auto pred = first_zero_times(w, p);
    const auto sim = simulated_first_zeros(trace, w, p);
    const TemporalSlit slit{0.0, w};
    out.zeros.add_row({w / constants::fs, pred.trailing / constants::ns, sim.trailing / constants::ns,
                       pred.leading ? *pred.leading / constants::ns : nan,
                       sim.leading ? *sim.leading / constants::ns : nan,
                       boundary_phase_difference(slit, sim.trailing, p),
                       sim.leading ? boundary_phase_difference(slit, *sim.leading, p) : nan,
                       period_m / constants::ns, period_2m / constants::ns});
  }
  return out;
}

EnergySweepTables energy_sweep_tables(const ScenarioConfig& config) {
  const auto base = config.source();
  const auto mode = config.reduction_mode();
  EnergySweepTables out;
  out.surface.columns = {"kinetic_energy_ev", "tau_ns", "P_AS"};
  out.summary.columns = {"kinetic_energy_ev", "flight_time_ns", "dip_halfwidth_ns"};
  const int n = config.sweep_points;
  for (int k = 0; k < n; ++k) {
    const double t_ns = n == 1 ? config.sweep_flight_max_ns
                               : config.sweep_flight_min_ns +
                                     (config.sweep_flight_max_ns - config.sweep_flight_min_ns) * k / (n - 1);
    auto source = base;
    source.params = PhysicalParams::electron(base.params.distance, t_ns * constants::ns, config.mass_multiplier);
    const auto grid = default_detection_grid(source.slot(), source.params, config.sweep_grid_points);
    const auto phi1 = slot_amplitude(source, 0, grid, config.quad);
    const auto phi2 = slot_amplitude(source, 1, grid, config.quad);
    const auto as = pair_delay_spectrum(phi1, phi2, SymmetryClass::antisymmetric, mode, source.params.flight_time);
    const double ke = kinetic_energy_ev(source.params);
    for (std::size_t i = 0; i < as.delays.size(); ++i)
      out.surface.add_row({ke, as.delays[i] / constants::ns, as.density[i]});
    // Half width of the dip: delay of the positive-side maximum.
    std::size_t best = as.delays.size() / 2;
    for (std::size_t i = as.delays.size() / 2; i < as.delays.size(); ++i)
      if (as.density[i] > as.density[best]) best = i;
    out.summary.add_row({ke, t_ns, as.delays[best] / constants::ns});
  }
  return out;
}

std::vector<ErrorReport> error_table(const std::vector<std::pair<int, int>>& pairs, const ScenarioConfig& config) {
  const auto source = config.source();
  const auto grid = config.grid_for_slit(source.slot(), source.params);
  const auto mode = config.reduction_mode();
  const double T = source.params.flight_time;
  std::map<int, AmplitudeTrace> slots;
  auto slot = [&](int one_based) -> const AmplitudeTrace& {
    auto it = slots.find(one_based);
    if (it == slots.end())
      it = slots.emplace(one_based, slot_amplitude(source, one_based - 1, grid, config.quad)).first;
    return it->second;
  };
  auto peak = [&](int i, int j) {
    return pair_delay_spectrum(slot(std::min(i, j)), slot(std::max(i, j)), SymmetryClass::product, mode, T).peak();
  };
  for (const auto& [i, j] : pairs) {
    if (i < 1 || j < 1) throw DomainError("interval indices are one-based");
    if (std::abs(i - j) < 2) {
      std::ostringstream os;
      os << "pair (" << i << "," << j << ") is adjacent; only non-adjacent intervals are incoherent";
      throw DomainError(os.str());
    }
  }
  const double ref = peak(1, 3);
  std::vector<ErrorReport> out;
  for (const auto& [i, j] : pairs) {
    const double v = (std::min(i, j) == 1 && std::max(i, j) == 3) ? ref : peak(i, j);
    out.push_back({i, j, std::abs(v - ref) / ref});
  }
  return out;
}

CsvTable error_table_csv(const std::vector<ErrorReport>& reports) {
  CsvTable t;
  t.columns = {"i", "j", "total_offset", "relative_error"};
  for (const auto& r : reports)
    t.add_row({static_cast<double>(r.first), static_cast<double>(r.second),
               static_cast<double>(r.first + r.second), r.relative_error});
  return t;
}

CsvTable rates_table(const ScenarioConfig& config) {
  const auto source = config.source();
  const int n = source.intervals().n;
  const double tc = source.coherence_time;
  const double tp = source.pulse_duration;
  const double window = config.window_ps * constants::ps;
  const double f = config.rep_rate_mhz * 1e6;
  const auto pol = config.polarization_mode();

  double p_incoh0 = 0.0;
  if (config.p_incoh0) {
    p_incoh0 = *config.p_incoh0;
  } else {
    const auto grid = config.grid_for_slit(source.slot(), source.params);
    const auto phi1 = slot_amplitude(source, 0, grid, config.quad);
    const auto phi3 = slot_amplitude(source, 2, grid, config.quad);
    p_incoh0 = pair_delay_spectrum(phi1, phi3, SymmetryClass::product, config.reduction_mode(),
                                   source.params.flight_time)
                   .shared_at_zero();
  }
  const double dpu = delta_p(tc, tp, p_incoh0, Polarization::unpolarized);
  const double dpp = delta_p(tc, tp, p_incoh0, Polarization::polarized);
  const double rru = reduced_rate(dpu, window, f);
  const double c = contrast_analytic(n, pol);
  const double p0 = p_incoh0 * (1.0 - c) / (1.0 + c);
  const auto mixed = mixed_rate(config.eta1_rate_mhz * 1e6, config.eta2_rate_mhz * 1e6, p0, p_incoh0, window);
  const double dte = config.electron_pulse_fs * constants::fs;

  CsvTable t;
  t.columns = {"n_intervals",       "degeneracy",         "c_pol",          "c_unpol",
               "p_incoh0",          "delta_p_unpol",      "delta_p_pol",    "reduced_rate_unpol_cps",
               "reduced_rate_pol_cps", "total_counts_unpol", "p0",           "mixed_rate_cps",
               "antibunching_visible", "eta_max",          "poisson_delta_p_unpol", "kinetic_energy_ev"};
  t.add_row({static_cast<double>(n), degeneracy(config.mean_eta, tc, tp).value,
             contrast_analytic(n, Polarization::polarized), contrast_analytic(n, Polarization::unpolarized),
             p_incoh0, dpu, dpp, rru, reduced_rate(dpp, window, f), rru * config.acq_time_s, p0, mixed.rate,
             mixed.antibunching_visible ? (*mixed.antibunching_visible ? 1.0 : 0.0) : -1.0,
             static_cast<double>(multielectron(2, dte, tc).eta_max),
             poisson_avg_delta_p(config.mean_eta, dte, tc, p_incoh0), kinetic_energy_ev(source.params)});
  return t;
}

DecoherenceOutputs decoherence_outputs(int n_intervals) {
  if (n_intervals < 3) throw DomainError("the emitter-entangled state needs N >= 3");
  const auto psi = n_intervals == 3 ? build_entangled_state() : generalize_state(n_intervals);
  DecoherenceOutputs out;
  out.pair_spin = partial_trace(density_from_state(psi), Subsystem::environment);
  out.pair = partial_trace(out.pair_spin, Subsystem::spin);
  out.single = partial_trace(out.pair, Subsystem::particle2);
  out.blocks = coherence_blocks(to_density_matrix(out.pair));
  return out;
}

std::string matrix_csv(const DensityMatrix& rho, const std::vector<std::string>& metadata) {
  std::string out;
  for (const auto& m : metadata) out += "# " + m + "\n";
  out += "basis";
  for (std::size_t j = 0; j < rho.dim(); ++j) out += "," + rho.basis.label(j);
  out += '\n';
  for (std::size_t i = 0; i < rho.dim(); ++i) {
    out += rho.basis.label(i);
    for (std::size_t j = 0; j < rho.dim(); ++j) out += "," + cell(rho(i, j));
    out += '\n';
  }
  return out;
}

std::string matrix_json(const DensityMatrix& rho) {
  nlohmann::ordered_json j;
  j["basis"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < rho.dim(); ++i) j["basis"].push_back(rho.basis.label(i));
  auto re = nlohmann::ordered_json::array();
  auto im = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < rho.dim(); ++i) {
    auto r = nlohmann::ordered_json::array();
    auto m = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < rho.dim(); ++k) {
      r.push_back(rho(i, k).real());
      m.push_back(rho(i, k).imag());
    }
    re.push_back(std::move(r));
    im.push_back(std::move(m));
  }
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  return j.dump(1) + "\n";
}

ScenarioResult run_scenario(const ScenarioConfig& config) {
  config.validate();
  ScenarioResult result;
  result.scenario = canonical_scenario(config.scenario);
  const auto meta = header(config, result.scenario);
  const std::filesystem::path dir = config.output_dir;

  auto emit = [&](const std::string& name, CsvTable table, const std::string& title) {
    table.metadata = meta;
    const std::string csv = to_csv(table);
    const auto path = dir / (name + ".csv");
    write_text_file(path, csv);
    result.files.push_back(path);
    if (config.svg && table.rows.size() >= 2) {
      const auto svg = dir / (name + ".svg");
      write_text_file(svg, emit_svg(csv, title));
      result.files.push_back(svg);
    }
  };
  auto emit_text = [&](const std::string& name, const std::string& text) {
    const auto path = dir / name;
    write_text_file(path, text);
    result.files.push_back(path);
  };

  const auto& s = result.scenario;
  if (s == "hbt") {
    emit("hbt", hbt_table(config), "Delay spectra");
  } else if (s == "contrast") {
    emit("contrast", contrast_table(config), "HBT contrast");
  } else if (s == "energy-sweep") {
    auto tables = energy_sweep_tables(config);
    emit("energy_sweep", std::move(tables.surface), "");
    emit("energy_sweep_summary", std::move(tables.summary), "Dip half width");
  } else if (s == "dit") {
    auto tables = dit_tables(config);
    emit("dit_single", std::move(tables.single), "Single slit");
    emit("dit_double", std::move(tables.double_slit), "Double slit");
    emit("dit_boson", std::move(tables.boson), "Double slit, mass m and 2m");
    emit("dit_zeros", std::move(tables.zeros), "");
  } else if (s == "error-table") {
    emit("error_table", error_table_csv(error_table(config.error_pairs, config)), "");
  } else if (s == "rates") {
    emit("rates", rates_table(config), "");
  } else if (s == "decohere") {
    const auto d = decoherence_outputs(config.decohere_intervals);
    const std::pair<const char*, const ExactDensity*> mats[] = {
        {"rho12_spin", &d.pair_spin}, {"rho12", &d.pair}, {"rho1", &d.single}};
    for (const auto& [name, m] : mats) {
      const auto rho = to_density_matrix(*m);
      emit_text(std::string(name) + ".csv", matrix_csv(rho, meta));
      emit_text(std::string(name) + ".json", matrix_json(rho));
    }
    std::string csv;
    for (const auto& m : meta) csv += "# " + m + "\n";
    csv += "first,second,off_diagonal,coherent\n";
    for (const auto& b : d.blocks)
      csv += b.first + "," + b.second + "," + format_number(b.off_diagonal) + "," + (b.coherent ? "1" : "0") + "\n";
    emit_text("coherence.csv", csv);
  }
  return result;
}

}  // namespace hbtdit
