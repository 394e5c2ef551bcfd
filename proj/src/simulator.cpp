#include "derand/simulator.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "derand/parallel.hpp"

namespace derand {

namespace {

using cdouble = std::complex<double>;

constexpr double kInvSqrt2 = 0.70710678118654752440;

std::size_t check_qubits(std::size_t qubits) {
  if (qubits == 0) throw std::invalid_argument("state needs at least one qubit");
  if (qubits > StateVector::kMaxQubits)
    throw capacity_error("state of " + std::to_string(qubits) + " qubits exceeds the cap of " +
                         std::to_string(StateVector::kMaxQubits));
  return qubits;
}

std::size_t bit_of_qubit(std::size_t qubits, std::size_t j) { return qubits - 1 - j; }

// In-place single-qubit frame change so that measuring `axis` becomes a
// computational-basis readout: H for X, H S^dagger for Y, nothing for Z.
void rotate_qubit(std::vector<cdouble>& amps, std::size_t qubits, std::size_t j, Pauli axis) {
  if (axis == Pauli::Z) return;
  const std::size_t mask = std::size_t{1} << bit_of_qubit(qubits, j);
  par::parallel_for(amps.size(), [&](std::size_t idx) {
    if (idx & mask) return;
    const cdouble a0 = amps[idx];
    const cdouble a1 = amps[idx | mask];
    if (axis == Pauli::X) {
      amps[idx] = (a0 + a1) * kInvSqrt2;
      amps[idx | mask] = (a0 - a1) * kInvSqrt2;
    } else {  // Y: rows (1, -i), (1, i) over sqrt(2)
      amps[idx] = (a0 - cdouble(0.0, 1.0) * a1) * kInvSqrt2;
      amps[idx | mask] = (a0 + cdouble(0.0, 1.0) * a1) * kInvSqrt2;
    }
  });
}

double plus_probability(const std::vector<cdouble>& amps, std::size_t qubits, std::size_t j) {
  const std::size_t mask = std::size_t{1} << bit_of_qubit(qubits, j);
  return par::blocked_sum(amps.size(), [&](std::size_t idx) {
    return (idx & mask) ? 0.0 : std::norm(amps[idx]);
  });
}

void project_qubit(std::vector<cdouble>& amps, std::size_t qubits, std::size_t j, int sign,
                   double probability) {
  const std::size_t mask = std::size_t{1} << bit_of_qubit(qubits, j);
  const std::size_t keep = sign > 0 ? 0 : mask;
  const double scale = 1.0 / std::sqrt(probability);
  par::parallel_for(amps.size(), [&](std::size_t idx) {
    amps[idx] = ((idx & mask) == keep) ? amps[idx] * scale : cdouble(0.0, 0.0);
  });
}

struct PauliAction {
  std::size_t flip = 0;    // bits toggled by X and Y factors
  std::size_t phase = 0;   // bits contributing a sign: Y and Z factors
  int y_count = 0;
  double coefficient = 1.0;
};

PauliAction action_of(const PauliObservable& o, std::size_t qubits) {
  PauliAction a;
  a.coefficient = o.coefficient();
  for (std::size_t j = 0; j < o.size(); ++j) {
    const std::size_t bit = std::size_t{1} << bit_of_qubit(qubits, j);
    switch (o.label(j)) {
      case Pauli::X: a.flip |= bit; break;
      case Pauli::Y: a.flip |= bit; a.phase |= bit; ++a.y_count; break;
      case Pauli::Z: a.phase |= bit; break;
      case Pauli::I: break;
    }
  }
  return a;
}

// phase(source index) for one Pauli string: i^y_count * (-1)^parity.
cdouble phase_at(const PauliAction& a, std::size_t idx) {
  static constexpr cdouble kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const int parity = std::popcount(idx & a.phase) & 1;
  const cdouble ip = kIPow[a.y_count & 3];
  return parity ? -ip : ip;
}

}  // namespace

StateVector StateVector::zero_state(std::size_t qubits) {
  check_qubits(qubits);
  std::vector<cdouble> amps(std::size_t{1} << qubits, cdouble(0.0, 0.0));
  amps[0] = 1.0;
  return StateVector(qubits, std::move(amps));
}

StateVector StateVector::uniform_superposition(std::size_t qubits) {
  check_qubits(qubits);
  const std::size_t dim = std::size_t{1} << qubits;
  std::vector<cdouble> amps(dim, cdouble(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
  return StateVector(qubits, std::move(amps));
}

StateVector StateVector::ghz(std::size_t qubits) {
  check_qubits(qubits);
  std::vector<cdouble> amps(std::size_t{1} << qubits, cdouble(0.0, 0.0));
  amps.front() = kInvSqrt2;
  amps.back() = kInvSqrt2;
  return StateVector(qubits, std::move(amps));
}

StateVector StateVector::product_state(std::span<const BlochSpec> specs) {
  check_qubits(specs.size());
  std::vector<cdouble> amps{cdouble(1.0, 0.0)};
  for (const BlochSpec& spec : specs) {
    if (spec.sign != 1 && spec.sign != -1)
      throw std::invalid_argument("Bloch spec sign must be +1 or -1");
    cdouble up, down;
    switch (spec.axis) {
      case Pauli::Z:
        up = spec.sign > 0 ? 1.0 : 0.0;
        down = spec.sign > 0 ? 0.0 : 1.0;
        break;
      case Pauli::X:
        up = kInvSqrt2;
        down = spec.sign > 0 ? kInvSqrt2 : -kInvSqrt2;
        break;
      case Pauli::Y:
        up = kInvSqrt2;
        down = cdouble(0.0, spec.sign > 0 ? kInvSqrt2 : -kInvSqrt2);
        break;
      default:
        throw std::invalid_argument("Bloch spec axis must be X, Y or Z");
    }
    std::vector<cdouble> next(amps.size() * 2);
    for (std::size_t i = 0; i < amps.size(); ++i) {
      next[2 * i] = amps[i] * up;
      next[2 * i + 1] = amps[i] * down;
    }
    amps = std::move(next);
  }
  return StateVector(specs.size(), std::move(amps));
}

StateVector StateVector::from_amplitudes(std::vector<cdouble> amplitudes) {
  if (amplitudes.size() < 2 || (amplitudes.size() & (amplitudes.size() - 1)) != 0)
    throw std::invalid_argument("amplitude count must be a power of two, at least 2");
  const auto qubits = static_cast<std::size_t>(std::countr_zero(amplitudes.size()));
  check_qubits(qubits);
  double norm2 = 0.0;
  for (const cdouble& a : amplitudes) norm2 += std::norm(a);
  const double norm = std::sqrt(norm2);
  if (std::abs(norm - 1.0) > 1e-6)
    throw std::invalid_argument("amplitudes are not normalized (|norm - 1| = " +
                                format_double(std::abs(norm - 1.0)) + " > 1e-6)");
  for (cdouble& a : amplitudes) a /= norm;
  return StateVector(qubits, std::move(amplitudes));
}

OutcomeRecord measure(const StateVector& state, const MeasurementBasis& basis, RngStream& rng) {
  if (basis.size() != state.qubits())
    throw dimension_error("basis length does not match the state");
  std::vector<cdouble> work(state.amplitudes().begin(), state.amplitudes().end());
  std::vector<int> signs(state.qubits());
  for (std::size_t j = 0; j < state.qubits(); ++j) {
    rotate_qubit(work, state.qubits(), j, basis.label(j));
    double p_plus = plus_probability(work, state.qubits(), j);
    if (p_plus < -1e-9 || p_plus > 1.0 + 1e-9)
      throw std::logic_error("conditional probability left [0, 1]; state was not normalized");
    p_plus = std::clamp(p_plus, 0.0, 1.0);
    const int sign = rng.uniform01() < p_plus ? 1 : -1;
    signs[j] = sign;
    project_qubit(work, state.qubits(), j, sign, sign > 0 ? p_plus : 1.0 - p_plus);
  }
  return OutcomeRecord(basis, std::move(signs));
}

double exact_expectation(const StateVector& state, const PauliObservable& o) {
  if (o.size() != state.qubits())
    throw dimension_error("observable length does not match the state");
  const PauliAction a = action_of(o, state.qubits());
  const auto amps = state.amplitudes();
  return par::blocked_sum(amps.size(), [&](std::size_t idx) {
    return (std::conj(amps[idx ^ a.flip]) * phase_at(a, idx) * amps[idx]).real();
  });
}

std::vector<double> exact_outcome_distribution(const StateVector& state,
                                               const MeasurementBasis& basis) {
  if (basis.size() != state.qubits())
    throw dimension_error("basis length does not match the state");
  std::vector<cdouble> work(state.amplitudes().begin(), state.amplitudes().end());
  for (std::size_t j = 0; j < state.qubits(); ++j)
    rotate_qubit(work, state.qubits(), j, basis.label(j));
  std::vector<double> dist(work.size());
  for (std::size_t idx = 0; idx < work.size(); ++idx) dist[idx] = std::norm(work[idx]);
  return dist;
}

double chain_outcome_probability(const StateVector& state, const MeasurementBasis& basis,
                                 std::span<const int> signs) {
  if (basis.size() != state.qubits())
    throw dimension_error("basis length does not match the state");
  if (signs.size() != state.qubits())
    throw dimension_error("sign string length does not match the state");
  std::vector<cdouble> work(state.amplitudes().begin(), state.amplitudes().end());
  double probability = 1.0;
  for (std::size_t j = 0; j < state.qubits(); ++j) {
    rotate_qubit(work, state.qubits(), j, basis.label(j));
    const double p_plus = std::clamp(plus_probability(work, state.qubits(), j), 0.0, 1.0);
    const double p = signs[j] > 0 ? p_plus : 1.0 - p_plus;
    if (p == 0.0) return 0.0;
    probability *= p;
    project_qubit(work, state.qubits(), j, signs[j], p);
  }
  return probability;
}

void apply_hamiltonian(const PauliSumHamiltonian& hamiltonian,
                       std::span<const std::complex<double>> in,
                       std::span<std::complex<double>> out) {
  const std::size_t qubits = hamiltonian.qubits();
  const std::size_t dim = std::size_t{1} << qubits;
  if (in.size() != dim || out.size() != dim)
    throw dimension_error("vector length does not match the Hamiltonian dimension");
  std::vector<PauliAction> actions;
  actions.reserve(hamiltonian.size());
  for (const auto& term : hamiltonian) actions.push_back(action_of(term, qubits));
  par::parallel_for(dim, [&](std::size_t idx) {
    cdouble acc(0.0, 0.0);
    for (const PauliAction& a : actions) {
      const std::size_t src = idx ^ a.flip;
      acc += a.coefficient * phase_at(a, src) * in[src];
    }
    out[idx] = acc;
  });
}

namespace {

double vector_norm(std::span<const cdouble> v) {
  double s = 0.0;
  for (const cdouble& x : v) s += std::norm(x);
  return std::sqrt(s);
}

cdouble inner(std::span<const cdouble> a, std::span<const cdouble> b) {
  cdouble s(0.0, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

GroundStateResult dense_ground_state(const PauliSumHamiltonian& hamiltonian,
                                     const GroundStateOptions& options) {
  const std::size_t qubits = hamiltonian.qubits();
  const std::size_t dim = std::size_t{1} << qubits;
  Eigen::MatrixXcd matrix = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& term : hamiltonian) {
    const PauliAction a = action_of(term, qubits);
    for (std::size_t src = 0; src < dim; ++src)
      matrix(src ^ a.flip, src) += a.coefficient * phase_at(a, src);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("dense eigensolver failed");

  const double energy = solver.eigenvalues()(0);
  std::vector<cdouble> amps(dim);
  for (std::size_t i = 0; i < dim; ++i) amps[i] = solver.eigenvectors().col(0)(i);

  GroundStateResult result{energy, StateVector::from_amplitudes(std::move(amps)), 0.0, false};
  std::vector<cdouble> hx(dim);
  apply_hamiltonian(hamiltonian, result.state.amplitudes(), hx);
  for (std::size_t i = 0; i < dim; ++i) hx[i] -= energy * result.state.amplitudes()[i];
  result.residual = vector_norm(hx);
  if (result.residual > options.residual_tol)
    throw std::runtime_error("dense eigensolver missed the residual tolerance");
  if (dim > 1) {
    const double gap = solver.eigenvalues()(1) - energy;
    result.degenerate = gap <= 1e-8 * std::max(1.0, std::abs(energy));
  }
  return result;
}

GroundStateResult lanczos_ground_state(const PauliSumHamiltonian& hamiltonian,
                                       const GroundStateOptions& options) {
  const std::size_t qubits = hamiltonian.qubits();
  const std::size_t dim = std::size_t{1} << qubits;
  const std::size_t window = std::min<std::size_t>(dim, 40);
  constexpr int kMaxRestarts = 400;

  RngStream rng(options.seed);
  std::vector<cdouble> start(dim);
  for (auto& x : start) x = cdouble(rng.uniform01() - 0.5, rng.uniform01() - 0.5);
  {
    const double norm = vector_norm(start);
    for (auto& x : start) x /= norm;
  }

  GroundStateResult result{0.0, StateVector::zero_state(qubits), 0.0, false};
  std::vector<std::vector<cdouble>> basis;
  std::vector<cdouble> w(dim), ritz(dim);

  for (int restart = 0; restart < kMaxRestarts; ++restart) {
    basis.clear();
    basis.push_back(start);
    std::vector<double> alpha, beta;

    for (std::size_t k = 0; k < window; ++k) {
      apply_hamiltonian(hamiltonian, basis[k], w);
      if (k > 0)
        for (std::size_t i = 0; i < dim; ++i) w[i] -= beta[k - 1] * basis[k - 1][i];
      const double a = inner(basis[k], w).real();
      alpha.push_back(a);
      for (std::size_t i = 0; i < dim; ++i) w[i] -= a * basis[k][i];
      // Full reorthogonalization, twice for good measure.
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& v : basis) {
          const cdouble overlap = inner(v, w);
          for (std::size_t i = 0; i < dim; ++i) w[i] -= overlap * v[i];
        }
      const double b = vector_norm(w);
      if (b < 1e-13 || k + 1 == window) break;
      beta.push_back(b);
      std::vector<cdouble> next(dim);
      for (std::size_t i = 0; i < dim; ++i) next[i] = w[i] / b;
      basis.push_back(std::move(next));
    }

    const std::size_t m = alpha.size();
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
    for (std::size_t i = 0; i < m; ++i) {
      tri(i, i) = alpha[i];
      if (i + 1 < m) tri(i, i + 1) = tri(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(tri);
    const double theta = solver.eigenvalues()(0);

    std::fill(ritz.begin(), ritz.end(), cdouble(0.0, 0.0));
    for (std::size_t k = 0; k < m; ++k) {
      const double y = solver.eigenvectors()(k, 0);
      for (std::size_t i = 0; i < dim; ++i) ritz[i] += y * basis[k][i];
    }
    const double norm = vector_norm(ritz);
    for (auto& x : ritz) x /= norm;

    apply_hamiltonian(hamiltonian, ritz, w);
    for (std::size_t i = 0; i < dim; ++i) w[i] -= theta * ritz[i];
    const double residual = vector_norm(w);
    if (residual <= options.residual_tol) {
      result.energy = theta;
      result.state = StateVector::from_amplitudes(ritz);
      result.residual = residual;
      if (m > 1) {
        const double gap = solver.eigenvalues()(1) - theta;
        result.degenerate = gap <= 1e-8 * std::max(1.0, std::abs(theta));
      }
      return result;
    }
    start = ritz;
  }
  throw std::runtime_error("iterative eigensolver did not reach the residual tolerance");
}

}  // namespace

GroundStateResult ground_state(const PauliSumHamiltonian& hamiltonian,
                               const GroundStateOptions& options) {
  const std::size_t qubits = hamiltonian.qubits();
  if (qubits > options.qubit_cap || qubits > StateVector::kMaxQubits)
    throw capacity_error("ground state of " + std::to_string(qubits) +
                         " qubits exceeds the cap of " +
                         std::to_string(std::min(options.qubit_cap, StateVector::kMaxQubits)));
  if (qubits <= options.dense_cap) return dense_ground_state(hamiltonian, options);
  return lanczos_ground_state(hamiltonian, options);
}

}  // namespace derand
