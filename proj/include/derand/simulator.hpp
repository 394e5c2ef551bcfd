#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "derand/estimator.hpp"
#include "derand/pauli.hpp"
#include "derand/rng.hpp"

namespace derand {

// Single-qubit eigenstate of a Pauli axis: {Z,+1} = |0>, {X,-1} = |->, etc.
struct BlochSpec {
  Pauli axis = Pauli::Z;
  int sign = 1;
};

// Dense n-qubit pure state. Amplitude index convention: qubit j owns bit
// (n-1-j), so the binary expansion of an index reads like the ket label
// left to right (|01> of two qubits is index 1). Normalized on construction
// and immutable afterwards.
class StateVector {
 public:
  static constexpr std::size_t kMaxQubits = 20;

  static StateVector zero_state(std::size_t qubits);
  static StateVector uniform_superposition(std::size_t qubits);
  static StateVector ghz(std::size_t qubits);
  static StateVector product_state(std::span<const BlochSpec> specs);

  /// Accepts amplitudes whose norm deviates from 1 by at most 1e-6 and
  /// renormalizes them exactly; larger deviations are rejected.
  static StateVector from_amplitudes(std::vector<std::complex<double>> amplitudes);

  std::size_t qubits() const noexcept { return qubits_; }
  std::size_t dim() const noexcept { return amplitudes_.size(); }
  std::span<const std::complex<double>> amplitudes() const noexcept { return amplitudes_; }

 private:
  StateVector(std::size_t qubits, std::vector<std::complex<double>> amplitudes)
      : qubits_(qubits), amplitudes_(std::move(amplitudes)) {}

  std::size_t qubits_ = 0;
  std::vector<std::complex<double>> amplitudes_;
};

// Samples one outcome per qubit, walking the chain rule: rotate the qubit
// into the computational frame of its basis label, draw the sign from the
// conditional probability, project and renormalize.
OutcomeRecord measure(const StateVector& state, const MeasurementBasis& basis, RngStream& rng);

/// <psi| O |psi> for a Pauli string, O(2^n).
double exact_expectation(const StateVector& state, const PauliObservable& o);

// Exact probabilities of all 2^n sign strings for one basis. Outcome index
// convention matches amplitudes: bit (n-1-j) set means sign -1 on qubit j.
std::vector<double> exact_outcome_distribution(const StateVector& state,
                                               const MeasurementBasis& basis);

// Probability of one specific sign string, accumulated along the same
// conditional chain the sampler walks. Used to cross-check the sampler
// against exact_outcome_distribution, which takes the direct route.
double chain_outcome_probability(const StateVector& state, const MeasurementBasis& basis,
                                 std::span<const int> signs);

struct GroundStateOptions {
  std::size_t dense_cap = 12;  // full diagonalization up to this qubit count
  std::size_t qubit_cap = 20;  // hard limit for the iterative eigensolver
  double residual_tol = 1e-8;
  std::uint64_t seed = 99;  // iterative start vector
};

struct GroundStateResult {
  double energy = 0.0;  // Hartree when the Hamiltonian is
  StateVector state;
  double residual = 0.0;   // ||H g - E g||
  bool degenerate = false;  // another eigenvalue sits within ~1e-8 of E
};

/// Minimal eigenpair of a Pauli-sum Hamiltonian. Dense diagonalization for
/// small systems, restarted Lanczos above dense_cap.
GroundStateResult ground_state(const PauliSumHamiltonian& hamiltonian,
                               const GroundStateOptions& options = {});

/// out = H * in (dense matrix-free application of the Pauli sum).
void apply_hamiltonian(const PauliSumHamiltonian& hamiltonian,
                       std::span<const std::complex<double>> in,
                       std::span<std::complex<double>> out);

}  // namespace derand
