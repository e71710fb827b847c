#include "hbtdit/beamstats.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hbtdit/errors.hpp"
#include "hbtdit/log.hpp"

namespace hbtdit {
namespace {

void require_positive(double x, const char* what) {
  if (!(std::isfinite(x) && x > 0.0)) throw DomainError(std::string(what) + " must be positive");
}

void require_non_negative(double x, const char* what) {
  if (!(std::isfinite(x) && x >= 0.0)) throw DomainError(std::string(what) + " must be non-negative");
}

bool is_integral(double x) { return std::abs(x - std::round(x)) <= 1e-9 * std::max(1.0, std::abs(x)); }

}  // namespace

void BeamStats::validate() const {
  require_non_negative(rep_rate, "repetition rate");
  require_positive(window, "coincidence window");
  require_non_negative(acquisition_time, "acquisition time");
  require_non_negative(eta1_rate, "single-electron pulse rate");
  require_non_negative(eta2_rate, "two-electron pulse rate");
  require_non_negative(mean_eta, "mean electron number");
  require_non_negative(emission_rate, "emission rate");
  require_non_negative(electron_pulse_duration, "electron pulse duration");
  if (eta1_rate + eta2_rate > rep_rate * (1.0 + 1e-12))
    throw DomainError("single- plus two-electron pulse rates exceed the repetition rate");
}

IntervalCount interval_count(double coherence_time, double pulse_duration) {
  require_positive(coherence_time, "coherence time");
  require_positive(pulse_duration, "pulse duration");
  if (pulse_duration < coherence_time * (1.0 - 1e-12))
    throw DomainError("pulse duration is shorter than the coherence time");
  IntervalCount out;
  out.exact = 2.0 * pulse_duration / coherence_time;
  out.n = std::max(2, static_cast<int>(std::lround(out.exact)));
  out.rounded = !is_integral(out.exact);
  if (out.rounded) {
    std::ostringstream os;
    os << "2 Tpulse / Tc = " << out.exact << " is not an integer; using N = " << out.n;
    warn(os.str());
  }
  return out;
}

Degeneracy degeneracy(double electrons_per_pulse, double coherence_time, double pulse_duration) {
  require_non_negative(electrons_per_pulse, "electrons per pulse");
  require_positive(coherence_time, "coherence time");
  require_positive(pulse_duration, "pulse duration");
  if (pulse_duration < coherence_time * (1.0 - 1e-12))
    throw DomainError("pulse duration is shorter than the coherence time");
  Degeneracy d{electrons_per_pulse * coherence_time / (2.0 * pulse_duration), false};
  if (d.value > 1.0) {
    warn("degeneracy exceeds the Pauli bound; capped at 1");
    d.value = 1.0;
    d.capped = true;
  }
  return d;
}

double contrast_analytic(int n_intervals, Polarization pol) {
  if (n_intervals < 2) throw DomainError("contrast needs N >= 2");
  const double n = n_intervals;
  return pol == Polarization::polarized ? 1.0 / (n - 1.0) : 1.0 / (2.0 * n - 1.0);
}

double delta_p(double coherence_time, double pulse_duration, double p_incoh0, Polarization pol) {
  require_positive(coherence_time, "coherence time");
  require_positive(pulse_duration, "pulse duration");
  require_positive(p_incoh0, "incoherent zero-delay density");
  const double ratio = coherence_time / pulse_duration;
  return pol == Polarization::polarized ? ratio * p_incoh0 : 0.5 * ratio * p_incoh0;
}

double reduced_rate(double delta_p, double window, double rep_rate) {
  require_non_negative(delta_p, "delta P");
  require_non_negative(window, "coincidence window");
  require_non_negative(rep_rate, "repetition rate");
  return delta_p * window * rep_rate;
}

MixedRate mixed_rate(double eta1, double eta2, double p0, double p_incoh0, double window) {
  require_non_negative(eta1, "eta1");
  require_non_negative(eta2, "eta2");
  require_non_negative(p0, "P0");
  require_non_negative(p_incoh0, "P_incoh0");
  require_non_negative(window, "coincidence window");
  MixedRate out;
  out.rate = ((eta2 - eta1) * p_incoh0 - eta2 * p0) * window;
  if (eta2 > 0.0) {
    // (eta2 - eta1)/eta2 > P0/P_incoh0, cross-multiplied to allow P_incoh0 = 0.
    out.antibunching_visible = (eta2 - eta1) * p_incoh0 > p0 * eta2;
  }
  return out;
}

MultiElectronPulse multielectron(int eta, double electron_pulse_duration, double coherence_time) {
  require_positive(electron_pulse_duration, "electron pulse duration");
  require_positive(coherence_time, "coherence time");
  MultiElectronPulse out;
  out.eta_max_exact = 2.0 * electron_pulse_duration / coherence_time;
  out.eta_max = static_cast<int>(std::floor(out.eta_max_exact + 1e-9));
  if (!is_integral(out.eta_max_exact)) {
    std::ostringstream os;
    os << "eta_max = " << out.eta_max_exact << " is not an integer; floored to " << out.eta_max;
    warn(os.str());
  }
  if (eta < 2 || eta > out.eta_max) {
    std::ostringstream os;
    os << "electron number " << eta << " outside the Pauli-allowed range [2, " << out.eta_max << "]";
    throw DomainError(os.str());
  }
  out.pulse_duration = 2.0 * electron_pulse_duration / eta;
  out.n_intervals = 4.0 * electron_pulse_duration / (eta * coherence_time);
  return out;
}

double poisson_pmf(int k, double mean) {
  if (k < 0) return 0.0;
  require_non_negative(mean, "Poisson mean");
  if (mean == 0.0) return k == 0 ? 1.0 : 0.0;
  return std::exp(k * std::log(mean) - mean - std::lgamma(k + 1.0));
}

double poisson_avg_delta_p(double mean_eta, double electron_pulse_duration,
                           double coherence_time, double p_incoh0) {
  require_positive(mean_eta, "mean electron number");
  require_positive(electron_pulse_duration, "electron pulse duration");
  require_positive(coherence_time, "coherence time");
  require_non_negative(p_incoh0, "incoherent zero-delay density");
  const double exact = 2.0 * electron_pulse_duration / coherence_time;
  const int eta_max = static_cast<int>(std::floor(exact + 1e-9));
  if (eta_max < 2) throw DomainError("eta_max < 2: pulse cannot hold an electron pair");
  if (!is_integral(exact)) warn("eta_max is not an integer; floored");
  double sum = 0.0;
  for (int eta = 2; eta <= eta_max; ++eta)
    sum += static_cast<double>(eta) / eta_max * 0.5 * p_incoh0 * poisson_pmf(eta, mean_eta);
  return sum;
}

double kinetic_energy_ev(const PhysicalParams& params) {
  params.validate();
  return params.kinetic_energy_joule() / constants::electron_volt;
}

}  // namespace hbtdit
