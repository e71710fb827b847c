#include "hbtdit/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "hbtdit/errors.hpp"
#include "hbtdit/log.hpp"
#include "hbtdit/numerics.hpp"

namespace hbtdit {
namespace {

using constants::pi;

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

// Per-detection-time state of the refinement.
struct PointQuadrature {
  complex ends{};
  complex inner{};
  complex estimate{};
  int intervals = 0;
  bool done = false;
};

}  // namespace

PhysicalParams PhysicalParams::electron(double distance, double flight_time,
                                        double mass_multiplier) {
  PhysicalParams p;
  p.mass = constants::electron_mass * mass_multiplier;
  p.distance = distance;
  p.flight_time = flight_time;
  p.validate();
  return p;
}

void PhysicalParams::validate() const {
  if (!positive_finite(mass)) throw DomainError("mass must be positive");
  if (!positive_finite(hbar)) throw DomainError("hbar must be positive");
  if (!positive_finite(distance)) throw DomainError("distance must be positive");
  if (!positive_finite(flight_time)) throw DomainError("flight time must be positive");
  if (!positive_finite(kinetic_energy_joule()))
    throw DomainError("kinetic energy must be finite and positive");
}

double PhysicalParams::kinetic_energy_joule() const {
  const double v = distance / flight_time;
  return 0.5 * mass * v * v;
}

void DetectionGrid::validate() const {
  if (!(std::isfinite(t_min) && std::isfinite(t_max) && t_min < t_max))
    throw DomainError("detection grid needs t_min < t_max");
  if (n_points < 2) throw DomainError("detection grid needs at least two points");
}

std::size_t DetectionGrid::nearest_index(double t) const {
  const double x = std::round((t - t_min) / spacing());
  if (x <= 0.0) return 0;
  return std::min(static_cast<std::size_t>(x), n_points - 1);
}

std::vector<double> DetectionGrid::times() const {
  std::vector<double> t(n_points);
  for (std::size_t i = 0; i < n_points; ++i) t[i] = at(i);
  return t;
}

void QuadratureConfig::validate() const {
  if (initial_samples_per_slit < 8) throw DomainError("quadrature needs at least 8 initial samples");
  if (!positive_finite(refinement_tolerance)) throw DomainError("quadrature tolerance must be positive");
  if (max_doublings < 1) throw DomainError("quadrature needs at least one doubling");
}

std::vector<double> AmplitudeTrace::intensity() const {
  std::vector<double> out(values.size());
  std::transform(values.begin(), values.end(), out.begin(),
                 [](const complex& z) { return std::norm(z); });
  return out;
}

double AmplitudeTrace::norm_squared() const {
  return numerics::trapezoid(intensity(), grid.spacing());
}

complex free_kernel(double t_i, double t_f, const PhysicalParams& params) {
  if (!(t_f > t_i)) throw DomainError("free_kernel: detection must follow emission (acausal path)");
  const double dt = t_f - t_i;
  // sqrt(m / (i 2 pi hbar dt)) on the principal branch is |.| * exp(-i pi/4).
  const double modulus = std::sqrt(params.mass / (2.0 * pi * params.hbar * dt));
  return std::polar(modulus, kernel_phase(t_i, t_f, params) - 0.25 * pi);
}

double kernel_phase(double t_i, double t_f, const PhysicalParams& params) {
  if (!(t_f > t_i)) throw DomainError("kernel_phase: detection must follow emission (acausal path)");
  return params.action_coefficient() / (t_f - t_i);
}

double source_frequency(const PhysicalParams& params) {
  const double T = params.flight_time;
  return -params.action_coefficient() / (T * T);
}

double exact_phase_residual(double a, double omega, const PhysicalParams& params) {
  const double T = params.flight_time;
  const double x = a / T;
  // 1/(1+x) - 1 written without cancellation.
  return params.action_coefficient() / T * (-x / (1.0 + x)) - omega * a;
}

double spatial_wavenumber(double delta, double tau, double mass, double hbar) {
  if (!(tau > 0.0)) throw DomainError("spatial_wavenumber: tau must be positive");
  return mass * delta / (hbar * tau);
}

FirstZeros first_zero_times(double a, const PhysicalParams& params) {
  if (!positive_finite(a)) throw DomainError("first_zero_times: slit duration must be positive");
  const double T = params.flight_time;
  const double shift = 4.0 * pi * params.hbar / (params.mass * a * params.distance * params.distance);
  const double base = 1.0 / (T * T);
  FirstZeros z;
  z.trailing = 1.0 / std::sqrt(base + shift);
  if (shift < base) z.leading = 1.0 / std::sqrt(base - shift);
  return z;
}

double boundary_phase_difference(const TemporalSlit& slit, double t_detect,
                                 const PhysicalParams& params) {
  const double a = slit.duration;
  const double late = t_detect - slit.end();
  const double early = t_detect - slit.start;
  if (!(late > 0.0)) throw DomainError("boundary_phase_difference: detection precedes slit end");
  // c/late - c/early = c a / (late * early)
  return source_frequency(params) * a + params.action_coefficient() * a / (late * early);
}

double far_field_ratio(double a, const PhysicalParams& params) { return a / params.flight_time; }

DetectionGrid default_detection_grid(double a, const PhysicalParams& params, std::size_t n_points) {
  const double T = params.flight_time;
  const auto zeros = first_zero_times(a, params);
  double width = T - zeros.trailing;
  if (zeros.leading) {
    width = std::max(width, *zeros.leading - T);
  } else {
    warn("leading first zero absent; detection window sized from the trailing zero");
  }
  DetectionGrid grid{std::max(T - 3.0 * width, 0.1 * T), T + 3.0 * width, n_points};
  grid.validate();
  return grid;
}

AmplitudeTrace slit_amplitude(const TemporalSlit& slit, const DetectionGrid& grid,
                              const PhysicalParams& params, const QuadratureConfig& quad) {
  params.validate();
  grid.validate();
  quad.validate();
  if (!positive_finite(slit.duration)) throw DomainError("slit duration must be positive");
  if (!(grid.t_min > slit.end()))
    throw DomainError("detection grid must start after the slit closes");
  if (far_field_ratio(slit.duration, params) > 1e-3) {
    std::ostringstream os;
    os << "slit duration / flight time = " << far_field_ratio(slit.duration, params)
       << " exceeds the far-field guard 1e-3";
    warn(os.str());
  }

  const double omega = source_frequency(params);
  const double c = params.action_coefficient();
  const double a = slit.duration;
  const double t0 = slit.start;

  // Kernel phase c/(t - ts) is split as c/t + c ts / (t (t - ts)); the large
  // first part is common to every source point and is applied once per t.
  auto integrand = [&](double t, double ts) {
    const double lag = t - ts;
    const double phase = omega * ts + c * ts / (t * lag);
    return std::polar(1.0 / std::sqrt(lag), phase);
  };

  const std::size_t n = grid.n_points;
  std::vector<PointQuadrature> state(n);
  const int n0 = quad.initial_samples_per_slit - 1;

  for (std::size_t i = 0; i < n; ++i) {
    const double t = grid.at(i);
    auto& s = state[i];
    s.intervals = n0;
    const double h = a / n0;
    s.ends = 0.5 * (integrand(t, t0) + integrand(t, t0 + a));
    for (int k = 1; k < n0; ++k) s.inner += integrand(t, t0 + k * h);
    s.estimate = h * (s.ends + s.inner);
  }

  double peak = 0.0;
  for (const auto& s : state) peak = std::max(peak, std::abs(s.estimate));
  if (peak == 0.0) throw DegenerateInputError("slit amplitude vanished on the whole grid");

  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = grid.at(i);
    auto& s = state[i];
    double change = 0.0;
    for (int level = 0; level < quad.max_doublings; ++level) {
      const int m = s.intervals;
      const double h = a / (2 * m);
      complex mids{};
      for (int k = 0; k < m; ++k) mids += integrand(t, t0 + (2 * k + 1) * h);
      s.inner += mids;
      s.intervals = 2 * m;
      const complex next = h * (s.ends + s.inner);
      change = std::abs(next - s.estimate) / peak;
      s.estimate = next;
      if (change < quad.refinement_tolerance) {
        s.done = true;
        break;
      }
    }
    worst = std::max(worst, change);
  }

  if (!std::all_of(state.begin(), state.end(), [](const auto& s) { return s.done; })) {
    std::ostringstream os;
    os << "slit amplitude did not converge after " << quad.max_doublings
       << " doublings (last relative change " << worst << ")";
    throw ConvergenceError(os.str(), worst);
  }

  const complex kernel_prefactor =
      std::polar(std::sqrt(params.mass / (2.0 * pi * params.hbar)), -0.25 * pi);
  AmplitudeTrace out{grid, std::vector<complex>(n), false};
  for (std::size_t i = 0; i < n; ++i) {
    const double t = grid.at(i);
    out.values[i] = kernel_prefactor * std::polar(1.0, c / t) * state[i].estimate;
  }
  return out;
}

AmplitudeTrace normalize_trace(const AmplitudeTrace& trace) {
  trace.grid.validate();
  const double norm2 = trace.norm_squared();
  if (!(norm2 > 0.0) || !std::isfinite(norm2))
    throw DegenerateInputError("cannot normalize a trace with zero norm");
  AmplitudeTrace out = trace;
  const double scale = 1.0 / std::sqrt(norm2);
  for (auto& v : out.values) v *= scale;
  out.normalized = true;
  return out;
}

complex overlap(const AmplitudeTrace& a, const AmplitudeTrace& b) {
  if (!(a.grid == b.grid) || a.values.size() != b.values.size())
    throw DomainError("overlap: traces live on different grids");
  std::vector<complex> product(a.values.size());
  for (std::size_t i = 0; i < product.size(); ++i) product[i] = std::conj(a.values[i]) * b.values[i];
  return numerics::trapezoid(product, a.grid.spacing());
}

void check_slits(std::span<const TemporalSlit> slits) {
  if (slits.empty()) throw DomainError("at least one slit is required");
  for (const auto& s : slits)
    if (!positive_finite(s.duration)) throw DomainError("slit duration must be positive");
  for (std::size_t i = 0; i < slits.size(); ++i)
    for (std::size_t j = i + 1; j < slits.size(); ++j)
      if (slits[i].start < slits[j].end() && slits[j].start < slits[i].end())
        throw DomainError("slits overlap");
}

SpectrumTrace multi_slit_spectrum(std::span<const TemporalSlit> slits, Superposition mode,
                                  const DetectionGrid& grid, const PhysicalParams& params,
                                  const QuadratureConfig& quad) {
  check_slits(slits);
  const std::size_t n = grid.n_points;
  std::vector<complex> amplitude(n);
  std::vector<double> density(n, 0.0);
  for (const auto& slit : slits) {
    const auto trace = slit_amplitude(slit, grid, params, quad);
    for (std::size_t i = 0; i < n; ++i) {
      amplitude[i] += trace.values[i];
      density[i] += std::norm(trace.values[i]);
    }
  }
  if (mode == Superposition::coherent)
    for (std::size_t i = 0; i < n; ++i) density[i] = std::norm(amplitude[i]);

  const double total = numerics::trapezoid(density, grid.spacing());
  if (!(total > 0.0)) throw DegenerateInputError("diffraction pattern has zero weight");
  for (auto& d : density) d /= total;
  return {grid, std::move(density)};
}

}  // namespace hbtdit
