#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "derand/pauli.hpp"

namespace derand {

// Accuracy/confidence knobs for the hit-count tail bound
//   Conf(O; P) = sum_l exp(-(eps^2 / 2) h_l),
// which certifies all estimates to within epsilon with probability 1 - delta
// once Conf <= delta / 2.
class CostParams {
 public:
  explicit CostParams(double epsilon, double delta = 0.05);

  double epsilon() const noexcept { return epsilon_; }
  /// nu = 1 - exp(-epsilon^2 / 2), the per-hit suppression factor.
  double nu() const noexcept { return nu_; }
  double delta() const noexcept { return delta_; }

 private:
  double epsilon_;
  double nu_;
  double delta_;
};

// A schedule in mid-construction: `completed_rows` are fully assigned,
// `current_row` holds the first labels of the next row, and every remaining
// label (up to total_budget rows) is treated as uniformly random.
struct PartialAssignment {
  std::vector<MeasurementBasis> completed_rows;
  std::vector<Pauli> current_row;
  std::size_t total_budget = 0;

  /// Throws std::logic_error when the state is inconsistent for n qubits.
  void validate(std::size_t qubits) const;
};

/// Number of rows that hit o.
int hit_count(const PauliObservable& o, std::span<const MeasurementBasis> rows);

/// Hit counts for every observable in the set.
std::vector<int> hit_counts(const ObservableSet& set, std::span<const MeasurementBasis> rows);

/// Conf(O; rows) = sum_l exp(-(eps^2/2) h_l). Lies in (0, L].
double confidence_bound(const ObservableSet& set, std::span<const MeasurementBasis> rows,
                        const CostParams& params);

/// Average of the confidence bound over all uniformly random schedules of
/// `budget` rows: sum_l (1 - nu / 3^w_l)^budget.
double expected_confidence_bound(const ObservableSet& set, std::size_t budget,
                                 const CostParams& params);

// Average of the confidence bound over the unassigned labels of a partial
// schedule. This is the from-scratch evaluator; the greedy builder maintains
// the same quantity incrementally and is checked against this one.
double conditional_expected_bound(const ObservableSet& set, const PartialAssignment& partial,
                                  const CostParams& params);

}  // namespace derand
