#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "hbtdit/errors.hpp"
#include "hbtdit/log.hpp"
#include "hbtdit/numerics.hpp"
#include "hbtdit/propagation.hpp"
#include "hbtdit/scenarios.hpp"
#include "oracles.hpp"

using namespace hbtdit;
namespace c = hbtdit::constants;

namespace {

const PhysicalParams& ref_params() {
  static const auto p = PhysicalParams::electron(5 * c::cm, 50 * c::ns);
  return p;
}

const AmplitudeTrace& five_fs_trace() {
  static const AmplitudeTrace trace = [] {
    const auto grid = default_detection_grid(5 * c::fs, ref_params());
    return slit_amplitude({0.0, 5 * c::fs}, grid, ref_params());
  }();
  return trace;
}

}  // namespace

TEST_CASE("kernel modulus and phase against direct evaluation") {
  const double dt = 50 * c::ns;
  const auto k = free_kernel(0.0, dt, ref_params());
  const auto ref = oracle::kernel(oracle::m_e, 0.05L, dt);
  CHECK(std::abs(k) == doctest::Approx(1.658e5).epsilon(1e-3));
  CHECK(std::abs(k) == doctest::Approx(static_cast<double>(std::abs(ref))).epsilon(1e-14));
  CHECK(kernel_phase(0.0, dt, ref_params()) == doctest::Approx(2.1595e8).epsilon(1e-4));
  // Reduced phases agree modulo 2 pi.
  const double d = std::arg(k) - static_cast<double>(std::arg(ref));
  CHECK(std::abs(std::remainder(d, 2 * M_PI)) < 1e-6);
}

TEST_CASE("kernel modulus squared closed form and translation invariance") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ti(0.0, 1e-6), dt(1e-9, 1e-7);
  const auto& p = ref_params();
  for (int i = 0; i < 100; ++i) {
    const double a = ti(rng), d = dt(rng);
    const auto k = free_kernel(a, a + d, p);
    CHECK(std::norm(k) == doctest::Approx(p.mass / (2 * M_PI * p.hbar * ((a + d) - a))).epsilon(1e-13));
  }
  const auto k0 = free_kernel(0.0, 40 * c::ns, p);
  const auto k1 = free_kernel(3 * c::fs, 3 * c::fs + 40 * c::ns, p);
  CHECK(std::abs(k0 - k1) / std::abs(k0) < 1e-6);
}

TEST_CASE("kernel rejects acausal paths") {
  CHECK_THROWS_AS(free_kernel(1e-9, 1e-9, ref_params()), DomainError);
  CHECK_THROWS_AS(free_kernel(2e-9, 1e-9, ref_params()), DomainError);
}

TEST_CASE("source frequency") {
  const double w = source_frequency(ref_params());
  CHECK(w < 0);
  CHECK(w == doctest::Approx(-4.319e15).epsilon(1e-3));
  const auto slow = PhysicalParams::electron(5 * c::cm, 500 * c::ns);
  CHECK(source_frequency(slow) == doctest::Approx(w / 100).epsilon(1e-12));
  const auto heavy = PhysicalParams::electron(5 * c::cm, 50 * c::ns, 2.0);
  CHECK(source_frequency(heavy) == doctest::Approx(2 * w).epsilon(1e-12));
}

TEST_CASE("exact phase residual") {
  const double a = 5 * c::fs;
  const double w = source_frequency(ref_params());
  CHECK(std::abs(exact_phase_residual(a, w, ref_params())) / std::abs(w * a) < 1e-6);
  // Removing the compensating frequency leaves the geometric phase.
  const long double cc = oracle::action(oracle::m_e, 0.05L);
  const long double T = 50e-9L, x = a / T;
  const long double geometric = cc / T * (1.0L / (1.0L + x) - 1.0L);
  CHECK(exact_phase_residual(a, 0.0, ref_params()) == doctest::Approx(static_cast<double>(geometric)).epsilon(1e-6));
  CHECK(exact_phase_residual(a, 0.0, ref_params()) != 0.0);
  CHECK(std::abs(exact_phase_residual(1e-25, w, ref_params())) < 1e-9);
}

TEST_CASE("spatial wavenumber") {
  CHECK(spatial_wavenumber(1e-3, 50 * c::ns, c::electron_mass) == doctest::Approx(1.7275e8).epsilon(1e-3));
  CHECK(spatial_wavenumber(0.0, 50 * c::ns, c::electron_mass) == 0.0);
  CHECK(spatial_wavenumber(2e-3, 50 * c::ns, c::electron_mass) ==
        doctest::Approx(2 * spatial_wavenumber(1e-3, 50 * c::ns, c::electron_mass)));
  CHECK_THROWS_AS(spatial_wavenumber(1e-3, 0.0, c::electron_mass), DomainError);
}

TEST_CASE("first zeros: closed form and sign structure") {
  const auto z = first_zero_times(5 * c::fs, ref_params());
  REQUIRE(z.leading);
  CHECK(*z.leading / c::ns == doctest::Approx(59.4).epsilon(2e-3));
  CHECK(z.trailing / c::ns == doctest::Approx(44.0).epsilon(2e-3));
  CHECK(*z.leading > ref_params().flight_time);
  CHECK(z.trailing < ref_params().flight_time);
  CHECK(*z.leading - ref_params().flight_time > ref_params().flight_time - z.trailing);

  const auto wide = first_zero_times(1e-9, ref_params());
  REQUIRE(wide.leading);
  CHECK(*wide.leading == doctest::Approx(ref_params().flight_time).epsilon(1e-4));
  CHECK(wide.trailing == doctest::Approx(ref_params().flight_time).epsilon(1e-4));

  // Far-field zeros versus the exact +/- 2 pi boundary-phase roots.
  const long double T = 50e-9L, a = 5e-15L;
  auto phase = [&](long double t) { return oracle::boundary_phase(oracle::m_e, 0.05L, T, a, t); };
  const long double lead = oracle::bisect([&](long double t) { return phase(t) + 2 * oracle::pi; }, T, 2 * T);
  const long double trail = oracle::bisect([&](long double t) { return phase(t) - 2 * oracle::pi; }, 0.5L * T, T);
  CHECK(std::abs(*z.leading - static_cast<double>(lead)) < 1e-4 * (*z.leading - 50 * c::ns));
  CHECK(std::abs(z.trailing - static_cast<double>(trail)) < 1e-4 * (50 * c::ns - z.trailing));
}

TEST_CASE("first zeros: absent leading zero is reported, not thrown") {
  // A slit so short that 4 pi hbar / (m a D^2) exceeds 1/T^2.
  const auto z = first_zero_times(0.1 * c::fs, ref_params());
  CHECK_FALSE(z.leading.has_value());
  CHECK(z.trailing < ref_params().flight_time);
}

TEST_CASE("shorter slits broaden more; larger energy narrows") {
  double previous = 1e9;
  for (double a : {2.5, 5.0, 10.0, 20.0}) {
    const auto z = first_zero_times(a * c::fs, ref_params());
    const double width = *z.leading - z.trailing;
    CHECK(width < previous);
    previous = width;
  }
  previous = 0.0;
  for (double t : {20.0, 30.0, 40.0, 50.0}) {
    const auto z = first_zero_times(5 * c::fs, PhysicalParams::electron(5 * c::cm, t * c::ns));
    const double width = *z.leading - z.trailing;
    CHECK(width > previous);
    previous = width;
  }
}

TEST_CASE("default detection grid") {
  const auto g = default_detection_grid(5 * c::fs, ref_params());
  CHECK(g.n_points == 2001);
  CHECK(g.t_min < 44 * c::ns);
  CHECK(g.t_max > 60 * c::ns);
  CHECK(g.t_min >= 0.1 * ref_params().flight_time);
  std::vector<std::string> warnings;
  ScopedWarningCapture capture([&](std::string_view w) { warnings.emplace_back(w); });
  default_detection_grid(0.1 * c::fs, ref_params());
  CHECK(warnings.size() == 1);
}

TEST_CASE("slit amplitude against an independent Simpson integral") {
  const auto& trace = five_fs_trace();
  const auto& g = trace.grid;
  for (std::size_t i : {std::size_t{100}, g.nearest_index(44.5 * c::ns), g.nearest_index(50 * c::ns),
                        g.nearest_index(57 * c::ns), std::size_t{1900}}) {
    const auto ref = oracle::slit_integral(oracle::m_e, 0.05L, 50e-9L, 0.0L, 5e-15L, g.at(i));
    const std::complex<double> r(static_cast<double>(ref.real()), static_cast<double>(ref.imag()));
    const auto y = trace.intensity();
    const double peak = std::sqrt(*std::max_element(y.begin(), y.end()));
    CHECK(std::abs(trace.values[i] - r) < 1e-5 * peak);
  }
  CHECK_FALSE(trace.normalized);
}

TEST_CASE("diffraction pattern: peak near T, zeros where predicted, asymmetric") {
  const auto& trace = five_fs_trace();
  const auto y = trace.intensity();
  const auto& g = trace.grid;
  const double T = ref_params().flight_time;
  const double t_peak = g.at(numerics::argmax(y));
  // The 1/dt modulus of the kernel pulls the |phi|^2 maximum slightly early;
  // t |phi|^2 (the phase-only pattern) peaks at T.
  CHECK(std::abs(t_peak - T) < 5e-3 * T);
  std::vector<double> weighted(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) weighted[i] = g.at(i) * y[i];
  CHECK(std::abs(g.at(numerics::argmax(weighted)) - T) <= g.spacing());

  const auto pred = first_zero_times(5 * c::fs, ref_params());
  const auto sim = simulated_first_zeros(trace, 5 * c::fs, ref_params());
  REQUIRE(sim.leading);
  CHECK(std::abs(*sim.leading - *pred.leading) < 5e-3 * (*pred.leading - T));
  CHECK(std::abs(sim.trailing - pred.trailing) < 5e-3 * (T - pred.trailing));
  CHECK(*sim.leading - T > T - sim.trailing);

  const TemporalSlit slit{0.0, 5 * c::fs};
  CHECK(boundary_phase_difference(slit, *sim.leading, ref_params()) == doctest::Approx(-2 * M_PI).epsilon(1e-2));
  CHECK(boundary_phase_difference(slit, sim.trailing, ref_params()) == doctest::Approx(2 * M_PI).epsilon(1e-2));
}

TEST_CASE("quadrature refinement is converged") {
  const auto& coarse = five_fs_trace();
  QuadratureConfig fine;
  fine.initial_samples_per_slit = 128;
  const auto finer = slit_amplitude({0.0, 5 * c::fs}, coarse.grid, ref_params(), fine);
  const auto a = coarse.intensity(), b = finer.intensity();
  const double peak = *std::max_element(a.begin(), a.end());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 2 * fine.refinement_tolerance * peak);
}

TEST_CASE("quadrature non-convergence raises with the residual") {
  QuadratureConfig q;
  q.initial_samples_per_slit = 8;
  q.refinement_tolerance = 1e-15;
  q.max_doublings = 1;
  const auto g = default_detection_grid(5 * c::fs, ref_params(), 21);
  try {
    slit_amplitude({0.0, 5 * c::fs}, g, ref_params(), q);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.last_residual() > 0.0);
  }
}

TEST_CASE("slit amplitude preconditions") {
  const DetectionGrid early{1 * c::fs, 60 * c::ns, 11};
  CHECK_THROWS_AS(slit_amplitude({0.0, 5 * c::fs}, early, ref_params()), DomainError);
  CHECK_THROWS_AS(slit_amplitude({0.0, 0.0}, default_detection_grid(5 * c::fs, ref_params(), 11), ref_params()), DomainError);
  std::vector<std::string> warnings;
  ScopedWarningCapture capture([&](std::string_view w) { warnings.emplace_back(w); });
  const auto near = PhysicalParams::electron(5 * c::cm, 1 * c::ps);
  const DetectionGrid g{0.5 * c::ps, 2 * c::ps, 5};
  QuadratureConfig q;
  q.max_doublings = 2;
  q.refinement_tolerance = 1e-2;
  try {
    slit_amplitude({0.0, 10 * c::fs}, g, near, q);
  } catch (const ConvergenceError&) {
  }
  CHECK_FALSE(warnings.empty());
}

TEST_CASE("normalization") {
  const auto& raw = five_fs_trace();
  const auto n = normalize_trace(raw);
  CHECK(n.normalized);
  CHECK(numerics::trapezoid(n.intensity(), n.grid.spacing()) == doctest::Approx(1.0).epsilon(1e-9));
  const auto again = normalize_trace(n);
  for (std::size_t i = 0; i < n.values.size(); ++i) CHECK(std::abs(again.values[i] - n.values[i]) <= 1e-12 * std::abs(n.values[i]) + 1e-300);
  auto scaled = raw;
  for (auto& v : scaled.values) v *= 3.0;
  const auto ns = normalize_trace(scaled);
  for (std::size_t i = 0; i < n.values.size(); i += 97) CHECK(std::abs(ns.values[i] - n.values[i]) < 1e-12 * std::abs(n.values[i]) + 1e-300);

  AmplitudeTrace zero{raw.grid, std::vector<complex>(raw.values.size()), false};
  CHECK_THROWS_AS(normalize_trace(zero), DegenerateInputError);
}

TEST_CASE("overlap") {
  const auto& raw = five_fs_trace();
  const auto a = normalize_trace(raw);
  CHECK(std::abs(overlap(a, a) - 1.0) < 1e-9);
  auto b = a;
  for (auto& v : b.values) v *= complex(0.0, 2.0);
  CHECK(std::abs(overlap(a, b) - complex(0.0, 2.0)) < 1e-9);
  // Sources two slots apart are nearly orthogonal at the detector.
  const auto c3 = normalize_trace(slit_amplitude({10 * c::fs, 5 * c::fs}, raw.grid, ref_params()));
  CHECK(std::abs(overlap(a, c3)) < 1e-3);
  const auto other = normalize_trace(slit_amplitude({0.0, 5 * c::fs}, default_detection_grid(5 * c::fs, ref_params(), 101), ref_params()));
  CHECK_THROWS_AS(overlap(a, other), DomainError);
}

TEST_CASE("multi-slit spectra") {
  const auto grid = default_detection_grid(5 * c::fs, ref_params());
  const TemporalSlit one[] = {{0.0, 5 * c::fs}};
  const auto coh1 = multi_slit_spectrum(one, Superposition::coherent, grid, ref_params());
  const auto inc1 = multi_slit_spectrum(one, Superposition::incoherent, grid, ref_params());
  CHECK(coh1.density == inc1.density);
  CHECK(numerics::trapezoid(coh1.density, grid.spacing()) == doctest::Approx(1.0).epsilon(1e-12));

  const TemporalSlit two[] = {{0.0, 5 * c::fs}, {10 * c::fs, 5 * c::fs}};
  const auto coh = multi_slit_spectrum(two, Superposition::coherent, grid, ref_params());
  const auto inc = multi_slit_spectrum(two, Superposition::incoherent, grid, ref_params());
  // Fringes: many more local minima in the coherent pattern.
  CHECK(numerics::local_minima(coh.density).size() > numerics::local_minima(inc.density).size() + 4);
  // Peaks of up to twice the incoherent pattern.
  for (std::size_t i = 0; i < coh.density.size(); ++i) CHECK(coh.density[i] <= 2.0 * inc.density[i] * (1 + 5e-2) + 1e-3 * inc.density[i]);

  const TemporalSlit clash[] = {{0.0, 5 * c::fs}, {4 * c::fs, 5 * c::fs}};
  CHECK_THROWS_AS(multi_slit_spectrum(clash, Superposition::coherent, grid, ref_params()), DomainError);
  CHECK_THROWS_AS(multi_slit_spectrum(std::span<const TemporalSlit>{}, Superposition::coherent, grid, ref_params()), DomainError);
}

TEST_CASE("mass 2m halves the fringe period") {
  const auto grid = default_detection_grid(5 * c::fs, ref_params());
  const TemporalSlit two[] = {{0.0, 5 * c::fs}, {10 * c::fs, 5 * c::fs}};
  const auto heavy = PhysicalParams::electron(5 * c::cm, 50 * c::ns, 2.0);
  const auto m = multi_slit_spectrum(two, Superposition::coherent, grid, ref_params());
  const auto m2 = multi_slit_spectrum(two, Superposition::coherent, grid, heavy);
  const double ratio = central_fringe_period(m2, 50 * c::ns) / central_fringe_period(m, 50 * c::ns);
  CHECK(ratio == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("parameter validation") {
  PhysicalParams p = ref_params();
  p.mass = -1;
  CHECK_THROWS_AS(p.validate(), DomainError);
  p = ref_params();
  p.distance = std::nan("");
  CHECK_THROWS_AS(p.validate(), DomainError);
  CHECK_THROWS_AS((DetectionGrid{2.0, 1.0, 10}.validate()), DomainError);
  CHECK_THROWS_AS((DetectionGrid{1.0, 2.0, 1}.validate()), DomainError);
  QuadratureConfig q;
  q.initial_samples_per_slit = 2;
  CHECK_THROWS_AS(q.validate(), DomainError);
  CHECK(ref_params().action_coefficient() == doctest::Approx(static_cast<double>(oracle::action(oracle::m_e, 0.05L))).epsilon(1e-15));
}

TEST_CASE("far-field ratio") {
  CHECK(far_field_ratio(5 * c::fs, ref_params()) == doctest::Approx(1e-7));
}
