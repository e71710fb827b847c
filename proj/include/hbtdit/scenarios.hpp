#pragma once

// Named scenario runners. Each builder is pure and returns tables; run_scenario
// adds the metadata header and writes files under config.output_dir.

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "hbtdit/config.hpp"
#include "hbtdit/decoherence.hpp"
#include "hbtdit/table.hpp"

namespace hbtdit {

/// Maps figure/table aliases onto the CLI scenario names
/// (dit, hbt, contrast, rates, decohere, error-table, energy-sweep).
std::string canonical_scenario(const std::string& name);

/// Delay spectra per pulse duration: tau_ns, P_incoh, then P_S_<T>fs,
/// P_AS_<T>fs, P_unpol_<T>fs for each duration.
CsvTable hbt_table(const ScenarioConfig& config);

/// Analytic and simulated contrasts with the reduced count rates.
CsvTable contrast_table(const ScenarioConfig& config);

struct DitTables {
  CsvTable single;       // t_ns, density
  CsvTable double_slit;  // t_ns, coherent, incoherent
  CsvTable boson;        // t_ns, coherent_m, coherent_2m
  CsvTable zeros;        // predicted vs simulated first zeros, boundary phases, fringe periods
};

DitTables dit_tables(const ScenarioConfig& config);

struct EnergySweepTables {
  CsvTable surface;  // kinetic_energy_ev, tau_ns, P_AS
  CsvTable summary;  // kinetic_energy_ev, flight_time_ns, dip_halfwidth_ns
};

EnergySweepTables energy_sweep_tables(const ScenarioConfig& config);

struct ErrorReport {
  int first = 0;   // one-based interval indices
  int second = 0;
  double relative_error = 0.0;
};

/// Relative deviation of max P_incoh^{i,j}(tau) from max P_incoh^{1,3}(tau),
/// with every slot at its true position.
std::vector<ErrorReport> error_table(const std::vector<std::pair<int, int>>& pairs,
                                     const ScenarioConfig& config);

CsvTable error_table_csv(const std::vector<ErrorReport>& reports);

/// Single-row table of the closed-form count-rate analytics.
CsvTable rates_table(const ScenarioConfig& config);

struct DecoherenceOutputs {
  ExactDensity pair_spin;   // after tracing the emitter
  ExactDensity pair;        // spin averaged
  ExactDensity single;      // one electron
  std::vector<CoherenceBlock> blocks;
};

DecoherenceOutputs decoherence_outputs(int n_intervals);

/// Row-major CSV with quoted "re,im" cells and basis labels.
std::string matrix_csv(const DensityMatrix& rho, const std::vector<std::string>& metadata = {});
/// {"basis": [...], "re": [[...]], "im": [[...]]}
std::string matrix_json(const DensityMatrix& rho);

/// Minima of `density` nearest to `centre` on either side, refined by a
/// parabola; returns right - left.
double central_fringe_period(const SpectrumTrace& spectrum, double centre);

/// Simulated first zeros: minima of |phi|^2 closest to the analytic ones.
FirstZeros simulated_first_zeros(const AmplitudeTrace& trace, double a, const PhysicalParams& params);

struct ScenarioResult {
  std::string scenario;
  std::vector<std::filesystem::path> files;
};

ScenarioResult run_scenario(const ScenarioConfig& config);

}  // namespace hbtdit
