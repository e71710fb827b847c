#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "hbtdit/beamstats.hpp"
#include "hbtdit/errors.hpp"
#include "hbtdit/log.hpp"
#include "oracles.hpp"

using namespace hbtdit;
namespace c = hbtdit::constants;

namespace {

struct WarningLog {
  std::vector<std::string> lines;
  ScopedWarningCapture capture{[this](std::string_view w) { lines.emplace_back(w); }};
};

}  // namespace

TEST_CASE("interval count") {
  CHECK(interval_count(10 * c::fs, 50 * c::fs).n == 10);
  CHECK(interval_count(10 * c::fs, 10 * c::fs).n == 2);
  CHECK(interval_count(10 * c::fs, 250 * c::fs).n == 50);
  CHECK_FALSE(interval_count(10 * c::fs, 35 * c::fs).rounded);
  {
    WarningLog log;
    const auto r = interval_count(10 * c::fs, 52 * c::fs);
    CHECK(r.n == 10);
    CHECK(r.rounded);
    CHECK(r.exact == doctest::Approx(10.4));
    CHECK(log.lines.size() == 1);
  }
  CHECK_THROWS_AS(interval_count(10 * c::fs, 5 * c::fs), DomainError);
  CHECK_THROWS_AS(interval_count(0.0, 5 * c::fs), DomainError);
}

TEST_CASE("degeneracy") {
  CHECK(degeneracy(2, 10 * c::fs, 10 * c::fs).value == 1.0);
  CHECK(degeneracy(2, 10 * c::fs, 50 * c::fs).value == doctest::Approx(0.2));
  CHECK(degeneracy(0, 10 * c::fs, 50 * c::fs).value == 0.0);
  WarningLog log;
  const auto d = degeneracy(5, 10 * c::fs, 10 * c::fs);
  CHECK(d.capped);
  CHECK(d.value == 1.0);
  CHECK(log.lines.size() == 1);
  // delta * N = n for a pair.
  for (double tp : {10.0, 15.0, 25.0, 35.0, 50.0, 250.0}) {
    const int n = interval_count(10 * c::fs, tp * c::fs).n;
    CHECK(degeneracy(2, 10 * c::fs, tp * c::fs).value * n == doctest::Approx(2.0));
  }
}

TEST_CASE("analytic contrast") {
  CHECK(contrast_analytic(2, Polarization::polarized) == 1.0);
  CHECK(contrast_analytic(2, Polarization::unpolarized) == doctest::Approx(1.0 / 3));
  CHECK(contrast_analytic(7, Polarization::polarized) == doctest::Approx(0.1667).epsilon(1e-3));
  CHECK(contrast_analytic(7, Polarization::unpolarized) == doctest::Approx(0.0769).epsilon(1e-3));
  CHECK_THROWS_AS(contrast_analytic(1, Polarization::polarized), DomainError);
  double previous = 1e9;
  for (int n = 2; n < 2000; ++n) {
    const double ratio = contrast_analytic(n, Polarization::polarized) / contrast_analytic(n, Polarization::unpolarized);
    CHECK(ratio == doctest::Approx((2.0 * n - 1) / (n - 1)).epsilon(1e-13));
    CHECK(ratio < previous);
    previous = ratio;
  }
  CHECK(previous == doctest::Approx(2.0).epsilon(1e-3));
  const double r50 = contrast_analytic(50, Polarization::polarized) / contrast_analytic(50, Polarization::unpolarized);
  CHECK(r50 == doctest::Approx(2.019).epsilon(1e-3));
}

TEST_CASE("zero-delay reduction and count rates") {
  const double dpu = delta_p(10 * c::fs, 50 * c::fs, 1.39e8, Polarization::unpolarized);
  CHECK(dpu == doctest::Approx(1.39e7));
  CHECK(delta_p(10 * c::fs, 50 * c::fs, 1.39e8, Polarization::polarized) == doctest::Approx(2.78e7));
  for (double tp : {10.0, 33.0, 1000.0})
    CHECK(delta_p(10 * c::fs, tp * c::fs, 3e7, Polarization::polarized) ==
          doctest::Approx(2 * delta_p(10 * c::fs, tp * c::fs, 3e7, Polarization::unpolarized)));
  CHECK(delta_p(10 * c::fs, 1.0, 1e8, Polarization::unpolarized) < 1e-5);
  CHECK_THROWS_AS(delta_p(10 * c::fs, 50 * c::fs, 0.0, Polarization::unpolarized), DomainError);

  const double r = reduced_rate(1.390e7, 26 * c::ps, 80e6);
  CHECK(r == doctest::Approx(2.89e4).epsilon(5e-3));
  CHECK(r * 1e5 == doctest::Approx(2.89e9).epsilon(5e-3));
  CHECK(reduced_rate(1.39e7, 0.0, 80e6) == 0.0);
}

TEST_CASE("mixed single/two-electron rate") {
  const double pi0 = 1.39e8;
  CHECK(*mixed_rate(0, 80e6, 0.5 * pi0, pi0, 26 * c::ps).antibunching_visible);
  CHECK_FALSE(*mixed_rate(40e6, 40e6, 0.0, pi0, 26 * c::ps).antibunching_visible);
  CHECK_FALSE(mixed_rate(0, 0, 0.5 * pi0, pi0, 26 * c::ps).antibunching_visible.has_value());
  // With every pulse a pair and P0 = ((N-1)/N) P_incoh0, the mixed rate is
  // the unpolarized reduced rate.
  const int n = 10;
  const double p0 = (n - 1.0) / n * pi0;
  const double mixed = mixed_rate(0, 80e6, p0, pi0, 26 * c::ps).rate;
  const double direct = reduced_rate(delta_p(10 * c::fs, 50 * c::fs, pi0, Polarization::unpolarized), 26 * c::ps, 80e6);
  CHECK(mixed == doctest::Approx(direct).epsilon(1e-2));
}

TEST_CASE("multi-electron pulses") {
  const auto m = multielectron(2, 50 * c::fs, 10 * c::fs);
  CHECK(m.eta_max == 10);
  CHECK(m.pulse_duration == doctest::Approx(50 * c::fs));
  const auto full = multielectron(10, 50 * c::fs, 10 * c::fs);
  CHECK(full.pulse_duration == doctest::Approx(10 * c::fs));
  CHECK(full.n_intervals == doctest::Approx(2.0));
  CHECK_THROWS_AS(multielectron(11, 50 * c::fs, 10 * c::fs), DomainError);
  CHECK_THROWS_AS(multielectron(1, 50 * c::fs, 10 * c::fs), DomainError);
  WarningLog log;
  CHECK(multielectron(2, 52 * c::fs, 10 * c::fs).eta_max == 10);
  CHECK(log.lines.size() == 1);
}

TEST_CASE("Poisson statistics") {
  CHECK(poisson_pmf(2, 2.0) == doctest::Approx(4.0 * std::exp(-2.0) / 2.0).epsilon(1e-14));
  CHECK(poisson_pmf(2, 2.0) == doctest::Approx(0.2707).epsilon(1e-3));
  for (double mean : {0.1, 2.0, 7.5, 30.0}) {
    double sum = 0;
    for (int k = 0; k < static_cast<int>(10 * mean + 20); ++k) sum += poisson_pmf(k, mean);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(poisson_pmf(-1, 2.0) == 0.0);

  // eta_max = 2: a single term.
  CHECK(poisson_avg_delta_p(2.0, 10 * c::fs, 10 * c::fs, 1e8) == doctest::Approx(0.5e8 * poisson_pmf(2, 2.0)));
  CHECK(poisson_avg_delta_p(1e-6, 50 * c::fs, 10 * c::fs, 1e8) < 1e-3);
  double direct = 0;
  for (int eta = 2; eta <= 10; ++eta) direct += eta / 10.0 * 0.5e8 * std::pow(2.0, eta) * std::exp(-2.0) / std::tgamma(eta + 1.0);
  CHECK(poisson_avg_delta_p(2.0, 50 * c::fs, 10 * c::fs, 1e8) == doctest::Approx(direct).epsilon(1e-12));
  CHECK_THROWS_AS(poisson_avg_delta_p(2.0, 4 * c::fs, 10 * c::fs, 1e8), DomainError);
}

TEST_CASE("kinetic energy") {
  const auto p = PhysicalParams::electron(5 * c::cm, 50 * c::ns);
  const double ke = kinetic_energy_ev(p);
  const long double direct = 0.5L * oracle::m_e * (0.05L / 50e-9L) * (0.05L / 50e-9L) / oracle::eV;
  CHECK(ke == doctest::Approx(static_cast<double>(direct)).epsilon(1e-12));
  CHECK(ke == doctest::Approx(2.84).epsilon(2e-3));
  CHECK(kinetic_energy_ev(PhysicalParams::electron(5 * c::cm, 25 * c::ns)) == doctest::Approx(4 * ke));
  CHECK(kinetic_energy_ev(PhysicalParams::electron(5 * c::cm, 50 * c::ns, 2.0)) == doctest::Approx(2 * ke));
}

TEST_CASE("beam statistics validation") {
  BeamStats b;
  CHECK_NOTHROW(b.validate());
  b.eta1_rate = 50e6;
  CHECK_THROWS_AS(b.validate(), DomainError);
  b = {};
  b.window = 0;
  CHECK_THROWS_AS(b.validate(), DomainError);
}
