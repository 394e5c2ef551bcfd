#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "derand/errors.hpp"

namespace derand {

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char pauli_char(Pauli p);
std::optional<Pauli> pauli_from_char(char c);

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

/// Single-qubit hit relation: a measurement label p informs o iff o is I or o == p.
inline bool label_hits(Pauli o, Pauli p) { return o == Pauli::I || o == p; }

class MeasurementBasis;

// Labels are stored as 2-bit codes (I=00, X=01, Y=10, Z=11) packed 32 per
// 64-bit word, so hit tests against a basis compare whole words instead of
// individual positions. Unused tail bits stay zero (= identity).
class PauliObservable {
 public:
  explicit PauliObservable(const std::vector<Pauli>& labels, double coefficient = 1.0);

  /// Parses "XXIZ" or "-0.5 XXIZ" (optional decimal coefficient, default 1).
  /// Throws parse_error with a 1-based column on illegal input.
  static PauliObservable parse(std::string_view text);

  std::size_t size() const noexcept { return size_; }
  Pauli label(std::size_t k) const;
  double coefficient() const noexcept { return coefficient_; }

  /// Number of non-identity labels.
  int weight() const noexcept { return weight_; }

  /// Number of non-identity labels at positions k, k+1, ..., n-1.
  /// suffix_weight(0) == weight(), suffix_weight(n) == 0.
  int suffix_weight(std::size_t k) const;

  std::string labels_str() const;
  /// "coefficient labels", round-trips through parse().
  std::string str() const;

  std::span<const std::uint64_t> words() const noexcept { return words_; }

  bool operator==(const PauliObservable& other) const = default;

 private:
  PauliObservable() = default;

  std::size_t size_ = 0;
  double coefficient_ = 1.0;
  int weight_ = 0;
  std::vector<std::uint64_t> words_;
};

// Full-weight Pauli string over {X,Y,Z}; identity labels are rejected.
class MeasurementBasis {
 public:
  explicit MeasurementBasis(const std::vector<Pauli>& labels);

  /// Parses "XYZ"; throws parse_error on anything outside {X,Y,Z}.
  static MeasurementBasis parse(std::string_view text);

  std::size_t size() const noexcept { return size_; }
  Pauli label(std::size_t k) const;
  std::string str() const;
  std::span<const std::uint64_t> words() const noexcept { return words_; }

  bool operator==(const MeasurementBasis& other) const = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

/// The hit relation o ▷ p: every non-identity label of o matches p.
/// Throws dimension_error if the lengths differ.
bool hits(const PauliObservable& o, const MeasurementBasis& p);

/// Hit test restricted to positions [0, count).
bool hits_prefix(const PauliObservable& o, const MeasurementBasis& p, std::size_t count);

// Ordered list of observables sharing one qubit count.
class ObservableSet {
 public:
  explicit ObservableSet(std::vector<PauliObservable> observables);

  std::size_t size() const noexcept { return observables_.size(); }
  std::size_t qubits() const noexcept { return qubits_; }
  const PauliObservable& operator[](std::size_t ell) const { return observables_[ell]; }
  const std::vector<PauliObservable>& items() const noexcept { return observables_; }

  auto begin() const { return observables_.begin(); }
  auto end() const { return observables_.end(); }

 private:
  std::vector<PauliObservable> observables_;
  std::size_t qubits_ = 0;
};

// A Pauli-sum Hamiltonian is an observable set whose coefficients carry the
// term energies (Hartree for molecular inputs).
using PauliSumHamiltonian = ObservableSet;

}  // namespace derand
