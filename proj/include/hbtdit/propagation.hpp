#pragma once

// Free-space propagation of a temporally gated matter wave from a point source
// to a point detector at fixed distance (diffraction in time).

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hbtdit/constants.hpp"

namespace hbtdit {

using complex = std::complex<double>;

struct PhysicalParams {
  double mass = constants::electron_mass;  // kg
  double hbar = constants::hbar;           // J s
  double distance = 5.0 * constants::cm;   // source to detector, m
  double flight_time = 50.0 * constants::ns;  // mean flight / anticoincidence time, s

  /// Electron with the mass scaled by `mass_multiplier` (2 for the paired
  /// "boson" picture).
  static PhysicalParams electron(double distance, double flight_time,
                                 double mass_multiplier = 1.0);

  /// Throws DomainError when any field is non-positive or non-finite.
  void validate() const;

  /// m D^2 / (2 hbar), the coefficient of 1/dt in the kernel phase.
  double action_coefficient() const { return mass * distance * distance / (2.0 * hbar); }

  /// (m/2)(D/T)^2 in joules.
  double kinetic_energy_joule() const;
};

struct TemporalSlit {
  double start = 0.0;     // s
  double duration = 0.0;  // s

  double end() const { return start + duration; }
};

struct DetectionGrid {
  double t_min = 0.0;
  double t_max = 0.0;
  std::size_t n_points = 0;

  void validate() const;
  double spacing() const { return (t_max - t_min) / static_cast<double>(n_points - 1); }
  double at(std::size_t i) const { return t_min + static_cast<double>(i) * spacing(); }
  /// Index of the grid point nearest to `t` (clamped into range).
  std::size_t nearest_index(double t) const;
  std::vector<double> times() const;

  friend bool operator==(const DetectionGrid&, const DetectionGrid&) = default;
};

struct QuadratureConfig {
  int initial_samples_per_slit = 64;
  double refinement_tolerance = 1e-6;
  int max_doublings = 12;

  void validate() const;
};

/// Complex single-particle amplitude on a detection-time grid.
struct AmplitudeTrace {
  DetectionGrid grid;
  std::vector<complex> values;
  bool normalized = false;

  std::vector<double> intensity() const;
  /// Trapezoid integral of |phi|^2 over the grid.
  double norm_squared() const;
};

/// Real single-particle detection density on a grid.
struct SpectrumTrace {
  DetectionGrid grid;
  std::vector<double> density;
};

enum class Superposition { coherent, incoherent };

// --- kernel and analytic predictors ---------------------------------------

/// Free-particle propagator between emission at t_i and detection at t_f.
/// Principal branch of the square root. Throws DomainError if t_f <= t_i.
complex free_kernel(double t_i, double t_f, const PhysicalParams& params);

/// Unreduced kernel phase m D^2 / (2 hbar (t_f - t_i)).
double kernel_phase(double t_i, double t_f, const PhysicalParams& params);

/// Source angular frequency that puts the central diffraction peak at T.
/// Negative: the source plane wave is exp(i omega t).
double source_frequency(const PhysicalParams& params);

/// Left-hand side of the exact in-phase condition for boundary trajectories of
/// a slit of duration `a` arriving at T. Vanishes to O(a/T) for the
/// far-field frequency.
double exact_phase_residual(double a, double omega, const PhysicalParams& params);

/// Wavenumber m * delta / (hbar * tau) of the analogous spatial problem.
double spatial_wavenumber(double delta, double tau, double mass,
                          double hbar = constants::hbar);

struct FirstZeros {
  std::optional<double> leading;  // later than T; absent when the pattern has no leading zero
  double trailing = 0.0;          // earlier than T
};

/// Far-field first zeros of a single slit of duration `a`.
FirstZeros first_zero_times(double a, const PhysicalParams& params);

/// Phase of the trajectory leaving the slit's end minus that of the one
/// leaving its start, both arriving at `t_detect`, source phase included.
double boundary_phase_difference(const TemporalSlit& slit, double t_detect,
                                 const PhysicalParams& params);

/// a / T; the far-field treatment assumes this is small.
double far_field_ratio(double a, const PhysicalParams& params);

/// Detection window T +/- 3 * max|t0 - T| around the first zeros of a slit of
/// duration `a`, lower edge clamped to T/10.
DetectionGrid default_detection_grid(double a, const PhysicalParams& params,
                                     std::size_t n_points = 2001);

// --- amplitudes -----------------------------------------------------------

/// phi(t) = integral over the slit of exp(i omega t_s) K(t_s, t) dt_s, by
/// composite trapezoid with sample doubling. Unnormalized.
/// Throws ConvergenceError when max_doublings is exhausted.
AmplitudeTrace slit_amplitude(const TemporalSlit& slit, const DetectionGrid& grid,
                              const PhysicalParams& params,
                              const QuadratureConfig& quad = {});

/// Scales to unit integral of |phi|^2 over the grid.
AmplitudeTrace normalize_trace(const AmplitudeTrace& trace);

/// Trapezoid estimate of <a|b>.
complex overlap(const AmplitudeTrace& a, const AmplitudeTrace& b);

/// Diffraction pattern behind several temporal slits, normalized to unit
/// time integral. Coherent: |sum phi_k|^2. Incoherent: sum |phi_k|^2.
SpectrumTrace multi_slit_spectrum(std::span<const TemporalSlit> slits, Superposition mode,
                                  const DetectionGrid& grid, const PhysicalParams& params,
                                  const QuadratureConfig& quad = {});

/// Throws DomainError if any two slits overlap or a duration is non-positive.
void check_slits(std::span<const TemporalSlit> slits);

}  // namespace hbtdit
