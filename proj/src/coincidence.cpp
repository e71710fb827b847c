#include "hbtdit/coincidence.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hbtdit/errors.hpp"
#include "hbtdit/log.hpp"
#include "hbtdit/numerics.hpp"

namespace hbtdit {
namespace {

void require_pair_inputs(const AmplitudeTrace& a, const AmplitudeTrace& b) {
  if (!(a.grid == b.grid) || a.values.size() != b.values.size() ||
      a.values.size() != a.grid.n_points)
    throw DomainError("pair density: amplitudes live on different grids");
  if (!a.normalized || !b.normalized)
    throw DomainError("pair density: amplitudes must be normalized");
}

// Evaluates the joint density at grid indices (q, r) without storing it.
// Both orderings of the exchange term use the same operand order, so the
// result is bitwise symmetric and the antisymmetric diagonal is exactly zero.
class PairEvaluator {
public:
  PairEvaluator(const AmplitudeTrace& phi1, const AmplitudeTrace& phi2, SymmetryClass cls)
      : phi1_(phi1.values), phi2_(phi2.values), cls_(cls) {
    if (cls_ == SymmetryClass::product) {
      i1_ = phi1.intensity();
      i2_ = phi2.intensity();
    }
  }

  double operator()(std::size_t q, std::size_t r) const {
    switch (cls_) {
      case SymmetryClass::symmetric:
        return 0.5 * std::norm(phi1_[q] * phi2_[r] + phi1_[r] * phi2_[q]);
      case SymmetryClass::antisymmetric:
        return 0.5 * std::norm(phi1_[q] * phi2_[r] - phi1_[r] * phi2_[q]);
      case SymmetryClass::product:
        break;
    }
    return 0.5 * (i1_[q] * i2_[r] + i1_[r] * i2_[q]);
  }

private:
  const std::vector<complex>& phi1_;
  const std::vector<complex>& phi2_;
  SymmetryClass cls_;
  std::vector<double> i1_, i2_;
};

SpectrumLabel label_for(SymmetryClass cls) {
  switch (cls) {
    case SymmetryClass::symmetric: return SpectrumLabel::coh_S;
    case SymmetryClass::antisymmetric: return SpectrumLabel::coh_AS;
    case SymmetryClass::product: break;
  }
  return SpectrumLabel::incoh;
}

std::ptrdiff_t delay_limit(std::ptrdiff_t support, double step, std::optional<double> max_delay) {
  if (!max_delay) return support;
  if (!(*max_delay >= 0.0)) throw DomainError("max_delay must be non-negative");
  if (*max_delay > support * step * (1.0 + 1e-12)) {
    warn("requested delay window exceeds the data support; truncated");
    return support;
  }
  return static_cast<std::ptrdiff_t>(std::floor(*max_delay / step + 1e-9));
}

template <class Eval>
DelaySpectrum reduce(const Eval& joint, const DetectionGrid& grid, SymmetryClass cls,
                     Reduction mode, double anticoincidence_time, std::optional<double> max_delay) {
  const auto n = static_cast<std::ptrdiff_t>(grid.n_points);
  const double dt = grid.spacing();
  DelaySpectrum out;
  out.mode = mode;
  out.label = label_for(cls);

  if (mode == Reduction::marginal) {
    const std::ptrdiff_t kmax = delay_limit(n - 1, dt, max_delay);
    for (std::ptrdiff_t k = -kmax; k <= kmax; ++k) {
      const std::ptrdiff_t q0 = std::max<std::ptrdiff_t>(0, -k);
      const std::ptrdiff_t q1 = std::min(n - 1, n - 1 - k);
      double value = 0.0;
      if (q1 > q0) {
        double inner = 0.0;
        for (std::ptrdiff_t q = q0 + 1; q < q1; ++q) inner += joint(q, q + k);
        value = dt * (inner + 0.5 * (joint(q0, q0 + k) + joint(q1, q1 + k)));
      }
      out.delays.push_back(static_cast<double>(k) * dt);
      out.density.push_back(value);
    }
    const double total = out.integral();
    if (!(total > 0.0)) throw DegenerateInputError("delay spectrum has zero weight");
    for (auto& d : out.density) d /= total;
    out.scale = total;
    return out;
  }

  const double T = anticoincidence_time;
  if (!(T >= grid.t_min && T <= grid.t_max))
    throw DomainError("slice reduction: anticoincidence time outside the detection grid");
  const auto c = static_cast<std::ptrdiff_t>(grid.nearest_index(T));
  if (std::abs(grid.at(static_cast<std::size_t>(c)) - T) > 1e-6 * dt)
    warn("slice reduction: anticoincidence time snapped to the nearest grid point");
  const std::ptrdiff_t half = delay_limit(std::min(c, n - 1 - c), 2.0 * dt, max_delay);
  for (std::ptrdiff_t k = -half; k <= half; ++k) {
    out.delays.push_back(2.0 * static_cast<double>(k) * dt);
    out.density.push_back(joint(c - k, c + k));
  }
  return out;
}

}  // namespace

std::string to_string(Reduction r) { return r == Reduction::marginal ? "marginal" : "slice"; }

std::string to_string(SpectrumLabel l) {
  switch (l) {
    case SpectrumLabel::coh_S: return "coh_S";
    case SpectrumLabel::coh_AS: return "coh_AS";
    case SpectrumLabel::incoh: return "incoh";
    case SpectrumLabel::mixture_pol: return "mixture_pol";
    case SpectrumLabel::mixture_unpol: return "mixture_unpol";
  }
  return "unknown";
}

std::string to_string(Polarization p) {
  return p == Polarization::polarized ? "polarized" : "unpolarized";
}

Reduction parse_reduction(const std::string& s) {
  if (s == "marginal") return Reduction::marginal;
  if (s == "slice") return Reduction::slice;
  throw DomainError("unknown reduction mode '" + s + "' (expected marginal|slice)");
}

Polarization parse_polarization(const std::string& s) {
  if (s == "polarized") return Polarization::polarized;
  if (s == "unpolarized") return Polarization::unpolarized;
  throw DomainError("unknown polarization '" + s + "' (expected polarized|unpolarized)");
}

void SourceSpec::validate() const {
  params.validate();
  if (!(std::isfinite(coherence_time) && coherence_time > 0.0))
    throw DomainError("coherence time must be positive");
  if (!(pulse_duration >= coherence_time * (1.0 - 1e-12)))
    throw DomainError("pulse duration is shorter than the coherence time");
}

JointDensity::JointDensity(DetectionGrid grid, std::vector<double> values, SymmetryClass cls)
    : grid_(grid), values_(std::move(values)), cls_(cls) {
  grid_.validate();
  if (values_.size() != grid_.n_points * grid_.n_points)
    throw DomainError("joint density size does not match its grid");
}

double JointDensity::integral() const {
  const std::size_t n = size();
  std::vector<double> rows(n);
  for (std::size_t i = 0; i < n; ++i)
    rows[i] = numerics::trapezoid(std::span<const double>(values_.data() + i * n, n), grid_.spacing());
  return numerics::trapezoid(rows, grid_.spacing());
}

double DelaySpectrum::integral() const {
  if (delays.size() < 2) return 0.0;
  return numerics::trapezoid(density, delays[1] - delays[0]);
}

double DelaySpectrum::peak() const {
  return density.empty() ? 0.0 : *std::max_element(density.begin(), density.end());
}

double DelaySpectrum::at_zero() const {
  if (delays.empty()) throw DegenerateInputError("empty delay spectrum");
  const auto it = std::lower_bound(delays.begin(), delays.end(), 0.0);
  if (it != delays.end() && *it == 0.0) return density[static_cast<std::size_t>(it - delays.begin())];
  if (it == delays.begin() || it == delays.end())
    throw DomainError("tau = 0 lies outside the delay window");
  warn("tau = 0 is off-grid; interpolating linearly");
  const auto hi = static_cast<std::size_t>(it - delays.begin());
  const double w = (0.0 - delays[hi - 1]) / (delays[hi] - delays[hi - 1]);
  return (1.0 - w) * density[hi - 1] + w * density[hi];
}

MixtureWeights MixtureWeights::for_intervals(int n) {
  if (n < 2) throw DomainError("mixture needs N >= 2");
  const double coherent = 2.0 / n;
  return {coherent, 1.0 - coherent};
}

JointDensity coherent_pair_density(const AmplitudeTrace& phi1, const AmplitudeTrace& phi2,
                                   Exchange sign) {
  require_pair_inputs(phi1, phi2);
  const auto cls = sign == Exchange::symmetric ? SymmetryClass::symmetric : SymmetryClass::antisymmetric;
  const PairEvaluator eval(phi1, phi2, cls);
  const std::size_t n = phi1.grid.n_points;
  std::vector<double> values(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) values[i * n + j] = eval(i, j);
  return {phi1.grid, std::move(values), cls};
}

JointDensity incoherent_pair_density(const AmplitudeTrace& phi1, const AmplitudeTrace& phi3) {
  require_pair_inputs(phi1, phi3);
  const PairEvaluator eval(phi1, phi3, SymmetryClass::product);
  const std::size_t n = phi1.grid.n_points;
  std::vector<double> values(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) values[i * n + j] = eval(i, j);
  return {phi1.grid, std::move(values), SymmetryClass::product};
}

DelaySpectrum delay_reduce(const JointDensity& joint, Reduction mode, double anticoincidence_time,
                           std::optional<double> max_delay) {
  auto eval = [&joint](std::ptrdiff_t q, std::ptrdiff_t r) {
    return joint(static_cast<std::size_t>(q), static_cast<std::size_t>(r));
  };
  return reduce(eval, joint.grid(), joint.symmetry_class(), mode, anticoincidence_time, max_delay);
}

DelaySpectrum pair_delay_spectrum(const AmplitudeTrace& phi1, const AmplitudeTrace& phi2,
                                  SymmetryClass cls, Reduction mode, double anticoincidence_time) {
  require_pair_inputs(phi1, phi2);
  const PairEvaluator pair(phi1, phi2, cls);
  auto eval = [&pair](std::ptrdiff_t q, std::ptrdiff_t r) {
    return pair(static_cast<std::size_t>(q), static_cast<std::size_t>(r));
  };
  return reduce(eval, phi1.grid, cls, mode, anticoincidence_time, std::nullopt);
}

DelaySpectrum combine(const std::vector<std::pair<double, const DelaySpectrum*>>& terms,
                      SpectrumLabel label) {
  if (terms.empty()) throw DomainError("combine: no spectra");
  const DelaySpectrum& first = *terms.front().second;
  DelaySpectrum out;
  out.delays = first.delays;
  out.mode = first.mode;
  out.label = label;
  out.density.assign(first.density.size(), 0.0);
  for (const auto& [weight, spectrum] : terms) {
    if (spectrum->delays != first.delays || spectrum->mode != first.mode)
      throw DomainError("combine: spectra do not share a delay grid");
    const double w = weight * spectrum->scale;
    for (std::size_t i = 0; i < out.density.size(); ++i) out.density[i] += w * spectrum->density[i];
  }
  if (out.mode == Reduction::marginal) {
    const double total = out.integral();
    if (!(total > 0.0)) throw DegenerateInputError("combine: weighted spectrum has zero weight");
    for (auto& d : out.density) d /= total;
    out.scale = total;
  }
  return out;
}

AmplitudeTrace slot_amplitude(const SourceSpec& source, int slot, const DetectionGrid& grid,
                              const QuadratureConfig& quad) {
  if (slot < 0) throw DomainError("slot index must be non-negative");
  const double a = source.slot();
  return normalize_trace(slit_amplitude({slot * a, a}, grid, source.params, quad));
}

namespace {

DetectionGrid grid_for(const SourceSpec& source, const MixtureOptions& options) {
  return options.grid ? *options.grid : default_detection_grid(source.slot(), source.params);
}

}  // namespace

MixtureResult assemble_mixture(DelaySpectrum coh_S, DelaySpectrum coh_AS, DelaySpectrum incoh, int n,
                               Polarization pol) {
  MixtureResult r;
  r.n_intervals = n;
  r.weights = MixtureWeights::for_intervals(n);
  r.coh_S = std::move(coh_S);
  r.coh_AS = std::move(coh_AS);
  r.incoh = std::move(incoh);
  const double wc = r.weights.coherent;
  const double wi = r.weights.incoherent;
  if (pol == Polarization::polarized) {
    r.mixture = combine({{wc, &r.coh_AS}, {wi, &r.incoh}}, SpectrumLabel::mixture_pol);
  } else {
    // Singlet (1/4) and triplet (3/4) shares of the coherent part.
    r.mixture = combine({{0.25 * wc, &r.coh_S}, {0.75 * wc, &r.coh_AS}, {wi, &r.incoh}},
                        SpectrumLabel::mixture_unpol);
  }
  return r;
}

namespace {

DelaySpectrum average(const std::vector<DelaySpectrum>& spectra, SpectrumLabel label) {
  std::vector<std::pair<double, const DelaySpectrum*>> terms;
  const double w = 1.0 / static_cast<double>(spectra.size());
  for (const auto& s : spectra) terms.emplace_back(w, &s);
  return combine(terms, label);
}

}  // namespace

MixtureResult mixture_spectrum(const SourceSpec& source, Polarization pol,
                               const MixtureOptions& options) {
  source.validate();
  const int n = source.intervals().n;
  const auto grid = grid_for(source, options);
  const double T = source.params.flight_time;
  const auto phi1 = slot_amplitude(source, 0, grid, options.quad);
  const auto phi2 = slot_amplitude(source, 1, grid, options.quad);
  const auto phi3 = slot_amplitude(source, 2, grid, options.quad);
  return assemble_mixture(pair_delay_spectrum(phi1, phi2, SymmetryClass::symmetric, options.mode, T),
                  pair_delay_spectrum(phi1, phi2, SymmetryClass::antisymmetric, options.mode, T),
                  pair_delay_spectrum(phi1, phi3, SymmetryClass::product, options.mode, T), n, pol);
}

MixtureResult exact_mixture_spectrum(const SourceSpec& source, Polarization pol,
                                     const MixtureOptions& options) {
  source.validate();
  const int n = source.intervals().n;
  if (n > options.exact_cap) {
    std::ostringstream os;
    os << "exact pair enumeration refused for N = " << n << " (cap " << options.exact_cap
       << "); use the representative-pair mixture instead";
    throw DomainError(os.str());
  }
  const auto grid = grid_for(source, options);
  const double T = source.params.flight_time;
  std::vector<AmplitudeTrace> slots;
  for (int k = 0; k < std::max(n, 3); ++k) slots.push_back(slot_amplitude(source, k, grid, options.quad));

  std::vector<DelaySpectrum> sym, anti, incoh;
  for (int k = 0; k + 1 < n; ++k) {
    sym.push_back(pair_delay_spectrum(slots[k], slots[k + 1], SymmetryClass::symmetric, options.mode, T));
    anti.push_back(pair_delay_spectrum(slots[k], slots[k + 1], SymmetryClass::antisymmetric, options.mode, T));
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 2; j < n; ++j)
      incoh.push_back(pair_delay_spectrum(slots[i], slots[j], SymmetryClass::product, options.mode, T));
  // N = 2 has no incoherent pair; keep the (1,3) representative as the reference level.
  if (incoh.empty())
    incoh.push_back(pair_delay_spectrum(slots[0], slots[2], SymmetryClass::product, options.mode, T));

  return assemble_mixture(average(sym, SpectrumLabel::coh_S), average(anti, SpectrumLabel::coh_AS),
                  average(incoh, SpectrumLabel::incoh), n, pol);
}

double numeric_contrast(const DelaySpectrum& mixture, const DelaySpectrum& incoh) {
  if (mixture.delays != incoh.delays) throw DomainError("numeric_contrast: spectra do not share a delay grid");
  const double p0 = mixture.shared_at_zero();
  const double pi0 = incoh.shared_at_zero();
  if (!(pi0 + p0 > 0.0)) throw DegenerateInputError("numeric_contrast: both zero-delay values vanish");
  return (pi0 - p0) / (pi0 + p0);
}

}  // namespace hbtdit
