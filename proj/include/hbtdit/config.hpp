#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hbtdit/beamstats.hpp"
#include "hbtdit/coincidence.hpp"
#include "hbtdit/propagation.hpp"

namespace hbtdit {

/// Scenario configuration. Units are carried in the JSON key names; the
/// fields below mirror those keys one to one.
struct ScenarioConfig {
  std::string scenario = "hbt";

  // source and geometry
  double t_c_fs = 10.0;
  double t_pulse_fs = 50.0;
  std::vector<double> pulse_durations_fs = {10, 15, 25, 35, 50, 250};
  double distance_cm = 5.0;
  double flight_time_ns = 50.0;
  double mass_multiplier = 1.0;

  // detection grid; window defaults to the first-zero estimate
  std::size_t grid_points = 2001;
  std::optional<double> window_min_ns;
  std::optional<double> window_max_ns;

  std::string reduction = "marginal";
  std::string polarization = "unpolarized";
  QuadratureConfig quad;
  bool exact_pairs = false;
  int exact_cap = 16;

  // diffraction in time
  std::optional<double> slit_fs;  // default Tc/2
  std::optional<double> slit_gap_fs;  // default equal to the slit duration

  // energy sweep over the flight time at fixed distance
  double sweep_flight_min_ns = 5.0;
  double sweep_flight_max_ns = 50.0;
  int sweep_points = 10;
  std::size_t sweep_grid_points = 801;

  // error table, one-based interval indices
  std::vector<std::pair<int, int>> error_pairs = {{1, 3}, {1, 10}, {8, 10}, {1, 50}, {1, 100}, {98, 100}};

  // count rates
  double rep_rate_mhz = 80.0;
  double window_ps = 26.0;
  double acq_time_s = 1e5;
  double eta1_rate_mhz = 0.0;
  double eta2_rate_mhz = 80.0;
  double mean_eta = 2.0;
  double electron_pulse_fs = 50.0;
  std::optional<double> p_incoh0;  // s^-1; simulated when absent

  // density matrices
  int decohere_intervals = 3;

  std::string output_dir = ".";
  bool svg = false;

  SourceSpec source() const;
  PhysicalParams params() const;
  Reduction reduction_mode() const { return parse_reduction(reduction); }
  Polarization polarization_mode() const { return parse_polarization(polarization); }
  /// Explicit window if configured, otherwise the default for slit `a`.
  DetectionGrid grid_for_slit(double a, const PhysicalParams& params) const;

  /// Cross-field checks; throws ParseError naming the field.
  void validate() const;
};

/// Parses the JSON schema. Unknown keys, wrong types and out-of-range values
/// raise ParseError naming the field (syntax errors carry line/column).
ScenarioConfig parse_config(const std::string& text);

/// Canonical JSON of the resolved config, including derived values.
std::string resolved_config_json(const ScenarioConfig& config, bool pretty = false);

}  // namespace hbtdit
