#include "hbtdit/decoherence.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "hbtdit/errors.hpp"

namespace hbtdit {
namespace {

std::string orbital_name(int i, int n) {
  if (n <= 26) return std::string(1, static_cast<char>('a' + i));
  return "t" + std::to_string(i + 1);
}

double to_double(const Rational& r) { return boost::rational_cast<double>(r); }

template <class S>
Operator<S> trace_factor(const Operator<S>& rho, int f) {
  const auto& old = rho.basis;
  std::vector<BasisFactor> kept = old.factors();
  kept.erase(kept.begin() + f);
  Operator<S> out{Basis(std::move(kept))};

  const std::size_t dim = old.dim();
  std::vector<std::size_t> reduced(dim), traced(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    auto d = old.digits(i);
    traced[i] = d[static_cast<std::size_t>(f)];
    d.erase(d.begin() + f);
    reduced[i] = out.basis.index(d);
  }
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      if (traced[i] == traced[j]) out(reduced[i], reduced[j]) += rho(i, j);
  return out;
}

template <class S>
Operator<S> trace_particle2(const Operator<S>& rho) {
  const auto& old = rho.basis;
  if (old.find(FactorKind::spin_pair) >= 0)
    throw DomainError("partial_trace(particle2): trace out the spin pair first");
  const int p = old.find(FactorKind::orbital_pair);
  if (p < 0) throw DomainError("partial_trace(particle2): basis has no orbital-pair factor");
  const auto& pair_factor = old.factors()[static_cast<std::size_t>(p)];

  std::vector<BasisFactor> kept = old.factors();
  kept[static_cast<std::size_t>(p)] = orbital_factor(pair_factor.n_orbitals);
  Operator<S> out{Basis(std::move(kept))};

  const std::size_t dim = old.dim();
  std::vector<std::size_t> reduced(dim);
  std::vector<int> second(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    auto d = old.digits(i);
    const auto [first, other] = pair_factor.pairs[d[static_cast<std::size_t>(p)]];
    second[i] = other;
    d[static_cast<std::size_t>(p)] = static_cast<std::size_t>(first);
    reduced[i] = out.basis.index(d);
  }
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      if (second[i] == second[j]) out(reduced[i], reduced[j]) += rho(i, j);
  return out;
}

template <class S>
Operator<S> dispatch_trace(const Operator<S>& rho, Subsystem subsystem) {
  switch (subsystem) {
    case Subsystem::environment: {
      const int f = rho.basis.find(FactorKind::environment);
      if (f < 0) throw DomainError("partial_trace: basis has no environment factor");
      return trace_factor(rho, f);
    }
    case Subsystem::spin: {
      const int f = rho.basis.find(FactorKind::spin_pair);
      if (f < 0) throw DomainError("partial_trace: basis has no spin-pair factor");
      return trace_factor(rho, f);
    }
    case Subsystem::particle2:
      return trace_particle2(rho);
  }
  throw DomainError("partial_trace: unknown subsystem");
}

long long exact_sqrt(long long v) {
  auto r = static_cast<long long>(std::llround(std::sqrt(static_cast<double>(v))));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r * r == v ? r : -1;
}

}  // namespace

Basis::Basis(std::vector<BasisFactor> factors) : factors_(std::move(factors)) {
  dim_ = 1;
  for (const auto& f : factors_) {
    if (f.size() == 0) throw DomainError("basis factor is empty");
    dim_ *= f.size();
  }
}

int Basis::find(FactorKind kind) const {
  for (std::size_t i = 0; i < factors_.size(); ++i)
    if (factors_[i].kind == kind) return static_cast<int>(i);
  return -1;
}

std::vector<std::size_t> Basis::digits(std::size_t index) const {
  std::vector<std::size_t> d(factors_.size());
  for (std::size_t k = factors_.size(); k-- > 0;) {
    d[k] = index % factors_[k].size();
    index /= factors_[k].size();
  }
  return d;
}

std::size_t Basis::index(const std::vector<std::size_t>& digits) const {
  std::size_t idx = 0;
  for (std::size_t k = 0; k < factors_.size(); ++k) idx = idx * factors_[k].size() + digits[k];
  return idx;
}

std::string Basis::label(std::size_t index) const {
  const auto d = digits(index);
  std::string out;
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (k) out += ';';
    out += factors_[k].labels[d[k]];
  }
  return out;
}

BasisFactor orbital_factor(int n_orbitals) {
  if (n_orbitals < 1) throw DomainError("need at least one orbital");
  BasisFactor f{FactorKind::orbital, {}, {}, n_orbitals};
  for (int i = 0; i < n_orbitals; ++i) f.labels.push_back(orbital_name(i, n_orbitals));
  return f;
}

BasisFactor orbital_pair_factor(int n_orbitals) {
  if (n_orbitals < 2) throw DomainError("need at least two orbitals for a pair basis");
  BasisFactor f{FactorKind::orbital_pair, {}, {}, n_orbitals};
  for (int i = 0; i < n_orbitals; ++i)
    for (int j = i + 1; j < n_orbitals; ++j) {
      f.pairs.emplace_back(i, j);
      f.pairs.emplace_back(j, i);
    }
  for (const auto& [i, j] : f.pairs) f.labels.push_back(orbital_name(i, n_orbitals) + orbital_name(j, n_orbitals));
  return f;
}

BasisFactor spin_pair_factor() { return {FactorKind::spin_pair, {"ud", "du"}, {}, 0}; }

BasisFactor environment_factor(std::vector<std::string> labels) {
  return {FactorKind::environment, std::move(labels), {}, 0};
}

Subsystem parse_subsystem(const std::string& name) {
  if (name == "env" || name == "environment") return Subsystem::environment;
  if (name == "spin") return Subsystem::spin;
  if (name == "particle2") return Subsystem::particle2;
  throw DomainError("unknown subsystem '" + name + "' (expected env|spin|particle2)");
}

Rational ExactState::norm_squared() const {
  Rational s = 0;
  for (const auto& a : amplitudes) s += a * a;
  return s;
}

double StateVector::norm() const {
  double s = 0.0;
  for (const auto& a : amplitudes) s += std::norm(a);
  return std::sqrt(s);
}

ExactState build_entangled_state() {
  Basis basis({orbital_pair_factor(3), spin_pair_factor(), environment_factor({"g", "e"})});
  ExactState psi{basis, std::vector<Rational>(basis.dim(), Rational(0))};
  // Pair digits follow the basis order ab, ba, ac, ca, bc, cb.
  enum { ab, ba, ac, ca, bc, cb };
  enum { ud, du };
  enum { g, e };
  const Rational q(1, 4);
  auto add = [&](int pair, int spin, int env, const Rational& v) {
    psi.amplitudes[basis.index({static_cast<std::size_t>(pair), static_cast<std::size_t>(spin),
                                static_cast<std::size_t>(env)})] += v;
  };
  // (|ij> + |ji>) x (|ud> - |du>) x |g> for the three pairs
  for (auto [ij, ji] : {std::pair{ab, ba}, std::pair{bc, cb}, std::pair{ac, ca}}) {
    add(ij, ud, g, q);
    add(ij, du, g, -q);
    add(ji, ud, g, q);
    add(ji, du, g, -q);
  }
  // (|ac> - |ca>) x (|ud> + |du>) x |e>
  add(ac, ud, e, q);
  add(ac, du, e, q);
  add(ca, ud, e, -q);
  add(ca, du, e, -q);
  return psi;
}

ExactState generalize_state(int n_intervals) {
  if (n_intervals < 3) throw DomainError("generalize_state needs N >= 3");
  const auto pairs = orbital_pair_factor(n_intervals);
  std::vector<std::string> env{"g"};
  std::vector<std::size_t> excited_pairs;  // digit of (i, j) with j - i >= 2
  for (std::size_t d = 0; d < pairs.pairs.size(); d += 2) {
    const auto [i, j] = pairs.pairs[d];
    if (j - i >= 2) {
      excited_pairs.push_back(d);
      env.push_back("e_" + pairs.labels[d]);
    }
  }
  if (env.size() == 2) env[1] = "e";

  Basis basis({pairs, spin_pair_factor(), environment_factor(env)});
  ExactState psi{basis, std::vector<Rational>(basis.dim(), Rational(0))};
  auto at = [&](std::size_t pair, std::size_t spin, std::size_t e) -> Rational& {
    return psi.amplitudes[basis.index({pair, spin, e})];
  };
  for (std::size_t d = 0; d < pairs.pairs.size(); d += 2) {
    at(d, 0, 0) += 1;
    at(d, 1, 0) -= 1;
    at(d + 1, 0, 0) += 1;
    at(d + 1, 1, 0) -= 1;
  }
  for (std::size_t k = 0; k < excited_pairs.size(); ++k) {
    const std::size_t d = excited_pairs[k];
    at(d, 0, k + 1) += 1;
    at(d, 1, k + 1) += 1;
    at(d + 1, 0, k + 1) -= 1;
    at(d + 1, 1, k + 1) -= 1;
  }

  const Rational n2 = psi.norm_squared();
  const long long root = n2.denominator() == 1 ? exact_sqrt(n2.numerator()) : -1;
  if (root <= 0) throw DomainError("generalize_state: normalization is not rational");
  for (auto& a : psi.amplitudes) a /= root;
  return psi;
}

ExactState exchange_particles(const ExactState& psi) {
  const int p = psi.basis.find(FactorKind::orbital_pair);
  const int s = psi.basis.find(FactorKind::spin_pair);
  if (p < 0 || s < 0) throw DomainError("exchange_particles needs orbital-pair and spin-pair factors");
  const auto& pf = psi.basis.factors()[static_cast<std::size_t>(p)];
  ExactState out{psi.basis, std::vector<Rational>(psi.amplitudes.size(), Rational(0))};
  for (std::size_t i = 0; i < psi.amplitudes.size(); ++i) {
    auto d = psi.basis.digits(i);
    const auto [a, b] = pf.pairs[d[static_cast<std::size_t>(p)]];
    const auto swapped = std::find(pf.pairs.begin(), pf.pairs.end(), std::pair{b, a});
    d[static_cast<std::size_t>(p)] = static_cast<std::size_t>(swapped - pf.pairs.begin());
    d[static_cast<std::size_t>(s)] = 1 - d[static_cast<std::size_t>(s)];
    out.amplitudes[psi.basis.index(d)] = psi.amplitudes[i];
  }
  return out;
}

StateVector to_state_vector(const ExactState& psi) {
  StateVector out{psi.basis, {}};
  out.amplitudes.reserve(psi.amplitudes.size());
  for (const auto& a : psi.amplitudes) out.amplitudes.emplace_back(to_double(a), 0.0);
  return out;
}

ExactDensity density_from_state(const ExactState& psi) {
  if (psi.norm_squared() != Rational(1)) throw DomainError("density_from_state: state is not normalized");
  ExactDensity rho{psi.basis};
  const std::size_t n = psi.amplitudes.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rho(i, j) = psi.amplitudes[i] * psi.amplitudes[j];
  return rho;
}

DensityMatrix density_from_state(const StateVector& psi) {
  if (std::abs(psi.norm() - 1.0) > 1e-12) throw DomainError("density_from_state: state is not normalized");
  DensityMatrix rho{psi.basis};
  const std::size_t n = psi.amplitudes.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rho(i, j) = psi.amplitudes[i] * std::conj(psi.amplitudes[j]);
  return rho;
}

ExactDensity partial_trace(const ExactDensity& rho, Subsystem subsystem) {
  return dispatch_trace(rho, subsystem);
}

DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem subsystem) {
  return dispatch_trace(rho, subsystem);
}

DensityMatrix to_density_matrix(const ExactDensity& rho) {
  DensityMatrix out{rho.basis};
  for (std::size_t i = 0; i < rho.entries.size(); ++i) out.entries[i] = {to_double(rho.entries[i]), 0.0};
  return out;
}

std::vector<std::vector<long long>> scaled_integers(const ExactDensity& rho, long long denominator) {
  std::vector<std::vector<long long>> out(rho.dim(), std::vector<long long>(rho.dim()));
  for (std::size_t i = 0; i < rho.dim(); ++i)
    for (std::size_t j = 0; j < rho.dim(); ++j) {
      const Rational v = rho(i, j) * denominator;
      if (v.denominator() != 1) throw DomainError("scaled_integers: denominator does not clear the entries");
      out[i][j] = v.numerator();
    }
  return out;
}

Rational trace(const ExactDensity& rho) {
  Rational s = 0;
  for (std::size_t i = 0; i < rho.dim(); ++i) s += rho(i, i);
  return s;
}

std::complex<double> trace(const DensityMatrix& rho) {
  std::complex<double> s{};
  for (std::size_t i = 0; i < rho.dim(); ++i) s += rho(i, i);
  return s;
}

double purity(const DensityMatrix& rho) {
  // Tr(rho^2) = sum_ij rho_ij rho_ji
  std::complex<double> s{};
  for (std::size_t i = 0; i < rho.dim(); ++i)
    for (std::size_t j = 0; j < rho.dim(); ++j) s += rho(i, j) * rho(j, i);
  return s.real();
}

double hermiticity_defect(const DensityMatrix& rho) {
  double worst = 0.0;
  for (std::size_t i = 0; i < rho.dim(); ++i)
    for (std::size_t j = 0; j < rho.dim(); ++j)
      worst = std::max(worst, std::abs(rho(i, j) - std::conj(rho(j, i))));
  return worst;
}

double min_eigenvalue(const DensityMatrix& rho) {
  const auto n = static_cast<Eigen::Index>(rho.dim());
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      m(i, j) = rho(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

std::vector<CoherenceBlock> coherence_blocks(const DensityMatrix& rho, double threshold) {
  const auto& factors = rho.basis.factors();
  if (factors.size() != 1 || factors.front().kind != FactorKind::orbital_pair)
    throw DomainError("coherence_blocks needs an orbital-pair density matrix (trace spin and environment first)");
  const auto& pf = factors.front();
  if (rho.entries.size() != pf.size() * pf.size())
    throw DomainError("coherence_blocks: matrix dimension does not match its basis");
  std::vector<CoherenceBlock> out;
  for (std::size_t d = 0; d + 1 < pf.size(); d += 2) {
    CoherenceBlock b;
    b.first = pf.labels[d];
    b.second = pf.labels[d + 1];
    b.off_diagonal = std::abs(rho(d, d + 1));
    b.coherent = b.off_diagonal > threshold;
    out.push_back(b);
  }
  return out;
}

DensityMatrix orbital_pair_density(int n_orbitals, const std::vector<std::vector<double>>& entries) {
  DensityMatrix rho{Basis({orbital_pair_factor(n_orbitals)})};
  if (entries.size() != rho.dim()) {
    std::ostringstream os;
    os << "orbital-pair matrix for " << n_orbitals << " orbitals must be " << rho.dim() << "x" << rho.dim();
    throw DomainError(os.str());
  }
  for (std::size_t i = 0; i < rho.dim(); ++i) {
    if (entries[i].size() != rho.dim()) throw DomainError("orbital-pair matrix is not square");
    for (std::size_t j = 0; j < rho.dim(); ++j) rho(i, j) = entries[i][j];
  }
  return rho;
}

}  // namespace hbtdit
