#pragma once

// Closed-form pulse statistics: interval counting, degeneracy, HBT contrast,
// reduced count rates and the Poissonian multi-electron average.

#include <optional>

#include "hbtdit/propagation.hpp"

namespace hbtdit {

enum class Polarization { polarized, unpolarized };

struct BeamStats {
  double rep_rate = 80e6;        // Hz
  double window = 26e-12;        // coincidence window t_w, s
  double acquisition_time = 1e5; // s
  double eta1_rate = 0.0;        // single-electron pulses per second
  double eta2_rate = 80e6;       // two-electron pulses per second
  double mean_eta = 2.0;         // mean electrons per pulse
  double emission_rate = 160e6;  // electrons per second
  double electron_pulse_duration = 50e-15;  // s

  void validate() const;
};

struct IntervalCount {
  int n = 0;
  double exact = 0.0;  // 2 Tpulse / Tc before rounding
  bool rounded = false;
};

/// N = round(2 Tpulse / Tc), at least 2. Warns when rounding changes the value.
IntervalCount interval_count(double coherence_time, double pulse_duration);

struct Degeneracy {
  double value = 0.0;
  bool capped = false;
};

/// n Tc / (2 Tpulse), capped at the Pauli bound 1.
Degeneracy degeneracy(double electrons_per_pulse, double coherence_time, double pulse_duration);

/// 1/(N-1) polarized, 1/(2N-1) unpolarized.
double contrast_analytic(int n_intervals, Polarization pol);

/// Reduction of the joint density at zero delay relative to the incoherent level.
double delta_p(double coherence_time, double pulse_duration, double p_incoh0, Polarization pol);

/// Delta P * t_w * f, assuming exactly two electrons per pulse.
double reduced_rate(double delta_p, double window, double rep_rate);

struct MixedRate {
  double rate = 0.0;  // counts/s
  /// Whether (eta2 - eta1)/eta2 > P0/P_incoh0. Empty when eta2 == 0 (no signal).
  std::optional<bool> antibunching_visible;
};

MixedRate mixed_rate(double eta1, double eta2, double p0, double p_incoh0, double window);

struct MultiElectronPulse {
  int eta_max = 0;            // floored
  double eta_max_exact = 0.0; // 2 dTe / Tc
  double pulse_duration = 0.0;  // effective Tpulse = 2 dTe / eta
  double n_intervals = 0.0;     // 4 dTe / (eta Tc)
};

/// Pauli-limited occupancy of a pulse carrying `eta` electrons.
MultiElectronPulse multielectron(int eta, double electron_pulse_duration, double coherence_time);

double poisson_pmf(int k, double mean);

/// Average unpolarized Delta P over a Poissonian electron number.
double poisson_avg_delta_p(double mean_eta, double electron_pulse_duration,
                           double coherence_time, double p_incoh0);

/// (m/2)(D/T)^2 in eV.
double kinetic_energy_ev(const PhysicalParams& params);

}  // namespace hbtdit
