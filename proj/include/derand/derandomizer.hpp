#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "derand/confidence.hpp"
#include "derand/pauli.hpp"

namespace derand {

enum class CostMode { FixedBudget, BudgetFree };

// Greedy construction settings.
//
// FixedBudget minimizes the conditional expectation of the confidence bound
// for exactly `budget` rows. BudgetFree minimizes the open-ended cost
// C = sum_l exp(-V_l) whose exponent V_l grows by eta/2 per hit, optionally
// scaled per observable by w_l = |coeff_l| / max |coeff| (weighted mode), and
// keeps adding rows until every observable has stop_min_hits hits or the
// `budget` cap is reached.
struct DerandConfig {
  CostMode mode = CostMode::FixedBudget;
  std::size_t budget = 0;  // row count (FixedBudget) or row cap (BudgetFree)
  CostParams params{0.9};  // FixedBudget accuracy driving the cost
  double eta = 0.9;        // BudgetFree exponent rate
  bool weighted = false;   // BudgetFree only
  std::optional<int> stop_min_hits;

  static DerandConfig fixed_budget(std::size_t rows, const CostParams& params);
  static DerandConfig budget_free(std::size_t cap, double eta = 0.9, bool weighted = false,
                                  std::optional<int> stop_min_hits = std::nullopt);

  /// Per-hit suppression factor of the active cost: 1 - exp(-eps^2/2) or
  /// 1 - exp(-eta/2).
  double nu() const;
  /// Exponent accrued per hit: eps^2/2 or eta/2.
  double half_rate() const;

  void validate() const;
};

// A measurement schedule plus enough provenance to reproduce and audit it.
struct Schedule {
  std::vector<MeasurementBasis> rows;

  std::string method;  // "derandomized" or "randomized"
  std::optional<DerandConfig> config;
  std::uint64_t seed = 0;  // randomized schedules only

  double confidence = 0.0;           // Conf of rows (FixedBudget)
  double expected_confidence = 0.0;  // random-schedule average (FixedBudget)
  std::vector<int> hit_counts;       // per input observable, derandomized runs
  std::vector<double> v_values;      // BudgetFree accumulated exponents
  bool stop_satisfied = true;        // false iff the cap cut a min-hits run short
  std::size_t dropped_terms = 0;     // weighted mode: zero-coefficient inputs
};

// Incremental per-observable state of the greedy run. One instance walks the
// n x M grid label by label; each step costs O(L) instead of the O(nML) a
// from-scratch evaluation would need, which is what makes the whole run
// O(nML). Candidate-cost accumulation runs on OpenMP blocks with a fixed
// deterministic reduction order, so results do not depend on thread count.
class ObservableTracker {
 public:
  ObservableTracker(const ObservableSet& set, const DerandConfig& config);

  std::size_t row() const noexcept { return rows_.size(); }
  std::size_t column() const noexcept { return col_; }
  bool done() const noexcept { return done_; }

  /// Greedy score of placing `candidate` at the current (row, column), on the
  /// cost's true scale. FixedBudget: Conf averaged over the remaining random
  /// labels. BudgetFree: the cost C with the label fixed.
  double label_cost(Pauli candidate) const;

  /// Candidate with the smallest score; ties resolve to the earliest of
  /// X, Y, Z, where "smaller" means smaller by more than 1e-12 relative.
  Pauli best_label() const;

  /// Fixes `label` at the current position and advances.
  void assign(Pauli label);

  int hits(std::size_t ell) const { return hits_[ell]; }
  bool prefix_alive(std::size_t ell) const { return alive_[ell] != 0; }
  int remaining_weight(std::size_t ell) const { return w_after_[ell]; }
  /// BudgetFree accumulated exponent V(o_ell) over completed rows.
  double v_value(std::size_t ell) const;
  int min_hits() const;
  bool stop_satisfied() const;

  const std::vector<MeasurementBasis>& rows() const noexcept { return rows_; }
  const DerandConfig& config() const noexcept { return cfg_; }

 private:
  struct CostSums {
    double base = 0.0;
    double delta[4] = {0.0, 0.0, 0.0, 0.0};  // indexed by Pauli code; [0] unused
    void combine(const CostSums& other) {
      base += other.base;
      for (int i = 1; i < 4; ++i) delta[i] += other.delta[i];
    }
  };

  template <bool Weighted>
  void accumulate(std::size_t begin, std::size_t end, CostSums& acc) const;
  CostSums step_sums() const;
  void begin_row();
  void finish_row();

  const ObservableSet* set_;
  DerandConfig cfg_;
  std::size_t n_ = 0;
  std::size_t count_ = 0;
  std::size_t stride_ = 0;

  std::vector<std::uint64_t> words_;     // packed labels, count_ x stride_
  std::vector<double> inv_weight_;       // 1 / w_l (all ones unless weighted)
  std::vector<std::int32_t> hits_;
  std::vector<std::int16_t> w_full_;
  std::vector<std::int16_t> w_after0_;   // suffix weight after position 0
  std::vector<std::int16_t> w_after_;
  std::vector<std::uint8_t> alive_;

  std::vector<double> log1p_nu3_;   // log1p(-nu * 3^-j)
  std::vector<double> hit_factor_;  // 1 - nu * 3^-j
  std::vector<double> hit_factor_w_;  // weighted: exp(log1p_nu3[j] / w_l)

  std::vector<double> t_miss_;  // exp(e_miss - shift), fixed per row
  double shift_ = 0.0;

  std::vector<MeasurementBasis> rows_;
  std::vector<Pauli> current_row_;
  std::size_t col_ = 0;
  bool done_ = false;
};

/// Runs the greedy construction over the whole grid.
Schedule derandomize(const ObservableSet& set, const DerandConfig& config);

/// Uniformly random full-weight rows; reproducible from the seed.
Schedule randomized_schedule(std::size_t qubits, std::size_t rows, std::uint64_t seed);

// From-scratch greedy score used to validate the incremental tracker (and to
// benchmark against it). partial.current_row must have fewer than n labels.
double label_cost_reference(const ObservableSet& set, const PartialAssignment& partial,
                            Pauli candidate, const DerandConfig& config);

/// Greedy run driven entirely by label_cost_reference. O(n^2 M^2 L); test and
/// benchmark baseline only.
Schedule derandomize_reference(const ObservableSet& set, const DerandConfig& config);

namespace detail {
/// a is smaller than b by more than 1e-12 relative.
inline bool strictly_less(double a, double b) {
  const double mag = std::abs(a) > std::abs(b) ? std::abs(a) : std::abs(b);
  return a < b - 1e-12 * mag;
}
/// Shared tie-break: scores indexed by Pauli code 1..3, X checked first.
inline Pauli pick_label(const double scores[4]) {
  Pauli best = Pauli::X;
  double best_score = scores[1];
  for (int code = 2; code <= 3; ++code) {
    if (strictly_less(scores[code], best_score)) {
      best = static_cast<Pauli>(code);
      best_score = scores[code];
    }
  }
  return best;
}
}  // namespace detail

}  // namespace derand
