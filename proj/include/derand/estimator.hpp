#pragma once

#include <span>
#include <vector>

#include "derand/confidence.hpp"
#include "derand/pauli.hpp"

namespace derand {

// One Pauli measurement outcome: the basis that was measured and the n
// observed signs.
struct OutcomeRecord {
  MeasurementBasis basis;
  std::vector<int> signs;  // entries +1 or -1

  OutcomeRecord(MeasurementBasis basis_in, std::vector<int> signs_in);
};

struct ObservableEstimate {
  double value = 0.0;  // in [-1, 1]; exactly 0 when never hit
  int hits = 0;
  bool never_hit = false;
};

struct EstimateReport {
  std::vector<ObservableEstimate> per_observable;
  std::size_t never_hit_count = 0;

  double energy = 0.0;             // sum_l coeff_l * estimate_l
  double energy_error_bound = 0.0;  // sum_l |coeff_l| * epsilon (union bound)
  double confidence = 0.0;          // Conf of the outcome bases
  bool certified = false;           // confidence <= delta / 2
  double epsilon = 0.0;
  double delta = 0.0;
};

// Empirical averages of marginalized outcome signs over the records that hit
// each observable. Sign products are accumulated in integer arithmetic.
EstimateReport estimate_all(const ObservableSet& set, std::span<const OutcomeRecord> outcomes,
                            const CostParams& params);

/// sqrt(mean of squared deviations from `reference`); empty input is an error.
double rmse(std::span<const double> estimates, double reference);

}  // namespace derand
