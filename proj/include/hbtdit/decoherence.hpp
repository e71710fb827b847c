#pragma once

// Electron pair entangled with a two-level emitter, and the partial traces
// that leave a partially coherent two-electron (and one-electron) state.
//
// The pipeline runs in exact rational arithmetic; floating point appears only
// when converting at the interface (to_density_matrix, to_state_vector).

#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

namespace hbtdit {

using Rational = boost::rational<long long>;

enum class FactorKind { orbital_pair, orbital, spin_pair, environment };

/// One tensor factor of a composite basis. For orbital pairs, `pairs` holds
/// the ordered (particle 1, particle 2) orbital indices of each label.
struct BasisFactor {
  FactorKind kind;
  std::vector<std::string> labels;
  std::vector<std::pair<int, int>> pairs;
  int n_orbitals = 0;

  std::size_t size() const { return labels.size(); }
  friend bool operator==(const BasisFactor&, const BasisFactor&) = default;
};

/// Mixed-radix product basis, first factor most significant.
class Basis {
public:
  Basis() = default;
  explicit Basis(std::vector<BasisFactor> factors);

  std::size_t dim() const { return dim_; }
  const std::vector<BasisFactor>& factors() const { return factors_; }
  /// Position of the factor of the given kind, or -1.
  int find(FactorKind kind) const;
  std::vector<std::size_t> digits(std::size_t index) const;
  std::size_t index(const std::vector<std::size_t>& digits) const;
  /// e.g. "ab;ud;g"
  std::string label(std::size_t index) const;

  friend bool operator==(const Basis& a, const Basis& b) { return a.factors_ == b.factors_; }

private:
  std::vector<BasisFactor> factors_;
  std::size_t dim_ = 1;
};

/// Orbitals a, b, c, ... (t1, t2, ... past 26).
BasisFactor orbital_factor(int n_orbitals);
/// Ordered distinct pairs: for i < j lexicographically, (i,j) then (j,i).
BasisFactor orbital_pair_factor(int n_orbitals);
/// {up-down, down-up}, labels "ud", "du".
BasisFactor spin_pair_factor();
/// Ground state "g" followed by the excitations.
BasisFactor environment_factor(std::vector<std::string> labels);

struct ExactState {
  Basis basis;
  std::vector<Rational> amplitudes;

  Rational norm_squared() const;
};

struct StateVector {
  Basis basis;
  std::vector<std::complex<double>> amplitudes;

  double norm() const;
};

template <class Scalar>
struct Operator {
  Basis basis;
  std::vector<Scalar> entries;  // row-major, dim x dim

  Operator() = default;
  explicit Operator(Basis b) : basis(std::move(b)), entries(basis.dim() * basis.dim(), Scalar(0)) {}

  std::size_t dim() const { return basis.dim(); }
  Scalar& operator()(std::size_t i, std::size_t j) { return entries[i * dim() + j]; }
  const Scalar& operator()(std::size_t i, std::size_t j) const { return entries[i * dim() + j]; }
};

using ExactDensity = Operator<Rational>;
using DensityMatrix = Operator<std::complex<double>>;

enum class Subsystem { environment, spin, particle2 };

Subsystem parse_subsystem(const std::string& name);

/// The N = 3 electron-pair / emitter state on
/// (orbital pair) x (spin pair) x (environment {g, e}), dim 24.
ExactState build_entangled_state();

/// N-interval analog: every orbital pair symmetric with a singlet on the
/// ground branch; each non-adjacent pair antisymmetric with
/// (ud + du) on its own orthogonal environment excitation.
ExactState generalize_state(int n_intervals);

/// Swaps the two electrons (orbital pair reversed, spins exchanged).
ExactState exchange_particles(const ExactState& psi);

StateVector to_state_vector(const ExactState& psi);

/// |psi><psi|; throws DomainError unless the state is normalized.
ExactDensity density_from_state(const ExactState& psi);
DensityMatrix density_from_state(const StateVector& psi);

/// Sums out one factor. Particle 2 requires an orbital-pair basis with the
/// spin already traced out.
ExactDensity partial_trace(const ExactDensity& rho, Subsystem subsystem);
DensityMatrix partial_trace(const DensityMatrix& rho, Subsystem subsystem);

DensityMatrix to_density_matrix(const ExactDensity& rho);

/// Entries of an exact matrix scaled by `denominator`, which must clear every
/// denominator (e.g. 16 for the pair-spin matrix).
std::vector<std::vector<long long>> scaled_integers(const ExactDensity& rho, long long denominator);

Rational trace(const ExactDensity& rho);
std::complex<double> trace(const DensityMatrix& rho);
double purity(const DensityMatrix& rho);
/// Largest |rho - rho^dagger| entry.
double hermiticity_defect(const DensityMatrix& rho);
double min_eigenvalue(const DensityMatrix& rho);

struct CoherenceBlock {
  std::string first;   // e.g. "ab"
  std::string second;  // e.g. "ba"
  double off_diagonal = 0.0;
  bool coherent = false;
};

/// Off-diagonal magnitude of every exchange sub-space {ij, ji} of an
/// orbital-pair density matrix; <= threshold counts as decohered.
std::vector<CoherenceBlock> coherence_blocks(const DensityMatrix& rho, double threshold = 1e-12);

/// Convenience: orbital-pair basis matrix built from real entries.
DensityMatrix orbital_pair_density(int n_orbitals, const std::vector<std::vector<double>>& entries);

}  // namespace hbtdit
