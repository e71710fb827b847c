#pragma once

// Two-electron joint detection densities on a shared detection-time grid,
// their reduction to delay spectra, and the partially coherent pulse mixture.

#include <optional>
#include <string>
#include <vector>

#include "hbtdit/beamstats.hpp"
#include "hbtdit/propagation.hpp"

namespace hbtdit {

enum class Exchange { symmetric, antisymmetric };
enum class SymmetryClass { symmetric, antisymmetric, product };
enum class Reduction { marginal, slice };
enum class SpectrumLabel { coh_S, coh_AS, incoh, mixture_pol, mixture_unpol };

std::string to_string(Reduction r);
std::string to_string(SpectrumLabel l);
std::string to_string(Polarization p);
Reduction parse_reduction(const std::string& s);
Polarization parse_polarization(const std::string& s);

struct SourceSpec {
  double coherence_time = 10.0 * constants::fs;
  double pulse_duration = 50.0 * constants::fs;
  PhysicalParams params;

  void validate() const;
  /// N = 2 Tpulse / Tc (rounded, warns).
  IntervalCount intervals() const { return interval_count(coherence_time, pulse_duration); }
  /// Duration of one phase-space interval, Tc / 2.
  double slot() const { return 0.5 * coherence_time; }
};

/// P(t1, t2) on grid x grid, row index t1. Units s^-2.
class JointDensity {
public:
  JointDensity(DetectionGrid grid, std::vector<double> values, SymmetryClass cls);

  const DetectionGrid& grid() const { return grid_; }
  SymmetryClass symmetry_class() const { return cls_; }
  std::size_t size() const { return grid_.n_points; }
  double operator()(std::size_t i1, std::size_t i2) const { return values_[i1 * size() + i2]; }
  const std::vector<double>& values() const { return values_; }
  /// Trapezoid double integral.
  double integral() const;

private:
  DetectionGrid grid_;
  std::vector<double> values_;
  SymmetryClass cls_;
};

struct DelaySpectrum {
  std::vector<double> delays;   // tau = t2 - t1, s, ascending
  std::vector<double> density;  // s^-1
  Reduction mode = Reduction::marginal;
  SpectrumLabel label = SpectrumLabel::incoh;
  /// Factor divided out by the marginal renormalization, in units of the
  /// shared single-particle normalization (1 -/+ |<phi1|phi2>|^2 for a
  /// coherent pair). Slice spectra keep 1.
  double scale = 1.0;

  double integral() const;
  double peak() const;
  /// Value at tau = 0; linear interpolation (with a warning) when off-grid.
  double at_zero() const;
  /// at_zero() on the shared normalization, comparable across components.
  double shared_at_zero() const { return scale * at_zero(); }
};

struct MixtureWeights {
  double coherent = 0.0;    // 2/N
  double incoherent = 0.0;  // (N-2)/N

  static MixtureWeights for_intervals(int n);
};

/// 1/2 |phi1(t1) phi2(t2) +/- phi1(t2) phi2(t1)|^2. Inputs must be normalized
/// and share a grid.
JointDensity coherent_pair_density(const AmplitudeTrace& phi1, const AmplitudeTrace& phi2,
                                   Exchange sign);

/// 1/2 (|phi1(t1)|^2 |phi3(t2)|^2 + |phi1(t2)|^2 |phi3(t1)|^2).
JointDensity incoherent_pair_density(const AmplitudeTrace& phi1, const AmplitudeTrace& phi3);

/// Marginal: P(tau) = integral of joint(t, t + tau) dt, renormalized to unit
/// integral over the tau window. Slice: joint(T - tau/2, T + tau/2), raw.
/// `max_delay` trims the tau window; requests beyond the data support warn.
DelaySpectrum delay_reduce(const JointDensity& joint, Reduction mode, double anticoincidence_time,
                           std::optional<double> max_delay = std::nullopt);

struct MixtureOptions {
  Reduction mode = Reduction::marginal;
  QuadratureConfig quad;
  std::optional<DetectionGrid> grid;  // default: default_detection_grid(Tc/2)
  int exact_cap = 16;                 // largest N for exact pair enumeration
};

struct MixtureResult {
  DelaySpectrum mixture;
  DelaySpectrum coh_S;
  DelaySpectrum coh_AS;
  DelaySpectrum incoh;
  MixtureWeights weights;
  int n_intervals = 0;
};

/// Partially coherent mixture from the representative pairs: slots (1,2)
/// for the coherent part and (1,3) for the incoherent part.
MixtureResult mixture_spectrum(const SourceSpec& source, Polarization pol,
                               const MixtureOptions& options = {});

/// Same mixture, averaging every adjacent (coherent) and non-adjacent
/// (incoherent) slot pair at its true position. Refuses N > exact_cap.
MixtureResult exact_mixture_spectrum(const SourceSpec& source, Polarization pol,
                                     const MixtureOptions& options = {});

/// (P_incoh(0) - P(0)) / (P_incoh(0) + P(0)), both on the shared normalization.
double numeric_contrast(const DelaySpectrum& mixture, const DelaySpectrum& incoh);

// --- building blocks shared with the scenarios ------------------------------

/// Normalized amplitude for slot k (zero based), i.e. slit [k a, (k+1) a).
AmplitudeTrace slot_amplitude(const SourceSpec& source, int slot, const DetectionGrid& grid,
                              const QuadratureConfig& quad);

/// Delay spectrum of a pair without materializing the joint density; equal
/// bit for bit to delay_reduce(coherent/incoherent_pair_density(...)).
DelaySpectrum pair_delay_spectrum(const AmplitudeTrace& phi1, const AmplitudeTrace& phi2,
                                  SymmetryClass cls, Reduction mode, double anticoincidence_time);

/// Weights precomputed component spectra into the N-interval mixture.
MixtureResult assemble_mixture(DelaySpectrum coh_S, DelaySpectrum coh_AS, DelaySpectrum incoh, int n,
                               Polarization pol);

/// Pointwise weighted sum of spectra sharing a delay grid, taken on the shared
/// normalization. Marginal results are renormalized to unit integral.
DelaySpectrum combine(const std::vector<std::pair<double, const DelaySpectrum*>>& terms,
                      SpectrumLabel label);

}  // namespace hbtdit
