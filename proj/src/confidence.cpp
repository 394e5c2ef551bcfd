#include "derand/confidence.hpp"

#include <cmath>
#include <stdexcept>

namespace derand {

CostParams::CostParams(double epsilon, double delta) : epsilon_(epsilon), delta_(delta) {
  // The tail bound is stated for accuracies in (0,1); epsilon == 1 is still
  // well defined and accepted.
  if (!(epsilon > 0.0) || !(epsilon <= 1.0))
    throw std::invalid_argument("epsilon must lie in (0, 1]");
  if (!(delta > 0.0) || !(delta < 1.0))
    throw std::invalid_argument("delta must lie in (0, 1)");
  nu_ = -std::expm1(-epsilon * epsilon / 2.0);
}

void PartialAssignment::validate(std::size_t qubits) const {
  for (const auto& row : completed_rows)
    if (row.size() != qubits)
      throw std::logic_error("partial assignment row length does not match the observable set");
  if (current_row.size() > qubits)
    throw std::logic_error("partial assignment current row is longer than the qubit count");
  for (Pauli p : current_row)
    if (p == Pauli::I)
      throw std::logic_error("partial assignment labels must come from {X, Y, Z}");
  if (completed_rows.size() > total_budget)
    throw std::logic_error("partial assignment has more rows than the budget");
  if (completed_rows.size() == total_budget && !current_row.empty())
    throw std::logic_error("partial assignment is over budget: current row past the last row");
}

int hit_count(const PauliObservable& o, std::span<const MeasurementBasis> rows) {
  int count = 0;
  for (const auto& row : rows) count += hits(o, row) ? 1 : 0;
  return count;
}

std::vector<int> hit_counts(const ObservableSet& set, std::span<const MeasurementBasis> rows) {
  std::vector<int> counts(set.size());
  for (std::size_t ell = 0; ell < set.size(); ++ell) counts[ell] = hit_count(set[ell], rows);
  return counts;
}

double confidence_bound(const ObservableSet& set, std::span<const MeasurementBasis> rows,
                        const CostParams& params) {
  const double rate = params.epsilon() * params.epsilon() / 2.0;
  double sum = 0.0;
  for (const auto& o : set) sum += std::exp(-rate * hit_count(o, rows));
  return sum;
}

double expected_confidence_bound(const ObservableSet& set, std::size_t budget,
                                 const CostParams& params) {
  double sum = 0.0;
  for (const auto& o : set) {
    const double miss = 1.0 - params.nu() * std::pow(1.0 / 3.0, o.weight());
    sum += std::pow(miss, static_cast<double>(budget));
  }
  return sum;
}

double conditional_expected_bound(const ObservableSet& set, const PartialAssignment& partial,
                                  const CostParams& params) {
  partial.validate(set.qubits());
  const double rate = params.epsilon() * params.epsilon() / 2.0;
  const double nu = params.nu();
  const std::size_t completed = partial.completed_rows.size();

  // All rows assigned: the bound is no longer random.
  if (completed == partial.total_budget)
    return confidence_bound(set, partial.completed_rows, params);

  const std::size_t assigned = partial.current_row.size();
  const auto remaining =
      static_cast<double>(partial.total_budget - completed - 1);  // rows after the current one

  double sum = 0.0;
  for (const auto& o : set) {
    const double past = std::exp(-rate * hit_count(o, partial.completed_rows));

    bool prefix_alive = true;
    for (std::size_t k = 0; k < assigned && prefix_alive; ++k)
      prefix_alive = label_hits(o.label(k), partial.current_row[k]);
    const double suffix_prob = std::pow(1.0 / 3.0, o.suffix_weight(assigned));
    const double current = 1.0 - (prefix_alive ? nu * suffix_prob : 0.0);

    const double future =
        std::pow(1.0 - nu * std::pow(1.0 / 3.0, o.weight()), remaining);

    sum += past * current * future;
  }
  return sum;
}

}  // namespace derand
