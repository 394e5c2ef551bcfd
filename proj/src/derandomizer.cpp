#include "derand/derandomizer.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>

#include "derand/parallel.hpp"
#include "derand/rng.hpp"

namespace derand {

namespace {
constexpr std::size_t kLabelsPerWord = 32;
}

DerandConfig DerandConfig::fixed_budget(std::size_t rows, const CostParams& params) {
  DerandConfig cfg;
  cfg.mode = CostMode::FixedBudget;
  cfg.budget = rows;
  cfg.params = params;
  cfg.validate();
  return cfg;
}

DerandConfig DerandConfig::budget_free(std::size_t cap, double eta, bool weighted,
                                       std::optional<int> stop_min_hits) {
  DerandConfig cfg;
  cfg.mode = CostMode::BudgetFree;
  cfg.budget = cap;
  cfg.eta = eta;
  cfg.weighted = weighted;
  cfg.stop_min_hits = stop_min_hits;
  cfg.validate();
  return cfg;
}

double DerandConfig::half_rate() const {
  return mode == CostMode::FixedBudget ? params.epsilon() * params.epsilon() / 2.0 : eta / 2.0;
}

double DerandConfig::nu() const {
  return mode == CostMode::FixedBudget ? params.nu() : -std::expm1(-eta / 2.0);
}

void DerandConfig::validate() const {
  if (budget == 0) throw std::invalid_argument("measurement budget must be at least 1");
  if (mode == CostMode::FixedBudget) {
    if (weighted)
      throw std::invalid_argument("weighted cost requires budget-free mode");
    if (stop_min_hits)
      throw std::invalid_argument("min-hits stopping requires budget-free mode");
  } else {
    if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
    if (stop_min_hits && *stop_min_hits <= 0)
      throw std::invalid_argument("stop_min_hits must be positive");
  }
}

ObservableTracker::ObservableTracker(const ObservableSet& set, const DerandConfig& config)
    : set_(&set), cfg_(config) {
  cfg_.validate();
  n_ = set.qubits();
  count_ = set.size();
  stride_ = (n_ + kLabelsPerWord - 1) / kLabelsPerWord;

  words_.resize(count_ * stride_);
  inv_weight_.assign(count_, 1.0);
  hits_.assign(count_, 0);
  w_full_.resize(count_);
  w_after0_.resize(count_);
  w_after_.resize(count_);
  alive_.assign(count_, 1);

  std::size_t identity_terms = 0;
  for (std::size_t ell = 0; ell < count_; ++ell) {
    const auto& o = set[ell];
    std::copy(o.words().begin(), o.words().end(), words_.begin() + ell * stride_);
    w_full_[ell] = static_cast<std::int16_t>(o.weight());
    w_after0_[ell] = static_cast<std::int16_t>(o.suffix_weight(1));
    if (o.weight() == 0) ++identity_terms;
  }
  if (identity_terms > 0)
    std::cerr << "warning: " << identity_terms
              << " identity-only observable(s); every row hits them\n";

  if (cfg_.weighted) {
    double max_abs = 0.0;
    for (const auto& o : set) max_abs = std::max(max_abs, std::abs(o.coefficient()));
    if (!(max_abs > 0.0))
      throw std::invalid_argument("weighted mode needs at least one nonzero coefficient");
    for (std::size_t ell = 0; ell < count_; ++ell) {
      const double c = std::abs(set[ell].coefficient());
      if (!std::isfinite(c))
        throw std::invalid_argument("weighted mode requires finite coefficients");
      if (!(c > 0.0))
        throw std::invalid_argument("weighted mode cannot track zero-coefficient terms");
      inv_weight_[ell] = max_abs / c;
    }
  }

  const double nu = cfg_.nu();
  log1p_nu3_.resize(n_ + 1);
  hit_factor_.resize(n_ + 1);
  double pow3 = 1.0;
  for (std::size_t j = 0; j <= n_; ++j) {
    log1p_nu3_[j] = std::log1p(-nu * pow3);
    hit_factor_[j] = 1.0 - nu * pow3;
    pow3 /= 3.0;
  }
  if (cfg_.weighted) {
    hit_factor_w_.resize(count_ * (n_ + 1));
    for (std::size_t ell = 0; ell < count_; ++ell)
      for (std::size_t j = 0; j <= n_; ++j)
        hit_factor_w_[ell * (n_ + 1) + j] = std::exp(log1p_nu3_[j] * inv_weight_[ell]);
  }

  t_miss_.resize(count_);
  current_row_.reserve(n_);
  begin_row();
}

void ObservableTracker::begin_row() {
  const bool fixed = cfg_.mode == CostMode::FixedBudget;
  const double rate = cfg_.half_rate();
  const double remaining = fixed ? static_cast<double>(cfg_.budget - rows_.size() - 1) : 0.0;

  double shift = -std::numeric_limits<double>::infinity();
  for (std::size_t ell = 0; ell < count_; ++ell) {
    double e = -rate * static_cast<double>(hits_[ell]);
    if (fixed)
      e += remaining * log1p_nu3_[static_cast<std::size_t>(w_full_[ell])];
    else
      e *= inv_weight_[ell];
    t_miss_[ell] = e;  // exponent for now; shifted below
    shift = std::max(shift, e);
  }
  shift_ = shift;
  par::parallel_for(count_, [&](std::size_t ell) { t_miss_[ell] = std::exp(t_miss_[ell] - shift_); });

  std::fill(alive_.begin(), alive_.end(), std::uint8_t{1});
  std::copy(w_after0_.begin(), w_after0_.end(), w_after_.begin());
  col_ = 0;
}

template <bool Weighted>
void ObservableTracker::accumulate(std::size_t begin, std::size_t end, CostSums& acc) const {
  const std::size_t wi = col_ / kLabelsPerWord;
  const int sh = static_cast<int>(2 * (col_ % kLabelsPerWord));
  double base = 0.0;
  double delta[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t ell = begin; ell < end; ++ell) {
    const double tm = t_miss_[ell];
    if (!alive_[ell]) {
      base += tm;
      continue;
    }
    const auto j = static_cast<std::size_t>(w_after_[ell]);
    const double factor =
        Weighted ? hit_factor_w_[ell * (n_ + 1) + j] : hit_factor_[j];
    const double th = tm * factor;
    const unsigned lab = (words_[ell * stride_ + wi] >> sh) & 3u;
    if (lab == 0) {
      base += th;  // identity here: every candidate hits
    } else {
      base += tm;
      delta[lab] += th - tm;
    }
  }
  acc.base += base;
  for (int i = 1; i < 4; ++i) acc.delta[i] += delta[i];
}

ObservableTracker::CostSums ObservableTracker::step_sums() const {
  if (cfg_.weighted)
    return par::blocked_reduce<CostSums>(count_, [this](std::size_t b, std::size_t e, CostSums& a) {
      accumulate<true>(b, e, a);
    });
  return par::blocked_reduce<CostSums>(count_, [this](std::size_t b, std::size_t e, CostSums& a) {
    accumulate<false>(b, e, a);
  });
}

double ObservableTracker::label_cost(Pauli candidate) const {
  if (done_) throw std::logic_error("tracker is finished; no label position to score");
  if (candidate == Pauli::I)
    throw std::invalid_argument("measurement labels come from {X, Y, Z}");
  const CostSums sums = step_sums();
  return (sums.base + sums.delta[static_cast<int>(candidate)]) * std::exp(shift_);
}

Pauli ObservableTracker::best_label() const {
  if (done_) throw std::logic_error("tracker is finished; no label position to score");
  const CostSums sums = step_sums();
  double scores[4];
  for (int code = 1; code <= 3; ++code) scores[code] = sums.base + sums.delta[code];
  scores[0] = 0.0;
  return detail::pick_label(scores);
}

void ObservableTracker::assign(Pauli label) {
  if (done_) throw std::logic_error("tracker is finished; cannot assign further labels");
  if (label == Pauli::I)
    throw std::invalid_argument("measurement labels come from {X, Y, Z}");

  const std::size_t wi = col_ / kLabelsPerWord;
  const int sh = static_cast<int>(2 * (col_ % kLabelsPerWord));
  const bool last_col = col_ + 1 == n_;
  const std::size_t wi_next = last_col ? 0 : (col_ + 1) / kLabelsPerWord;
  const int sh_next = last_col ? 0 : static_cast<int>(2 * ((col_ + 1) % kLabelsPerWord));
  const auto code = static_cast<unsigned>(label);

  par::parallel_for(count_, [&](std::size_t ell) {
    if (alive_[ell]) {
      const unsigned lab = (words_[ell * stride_ + wi] >> sh) & 3u;
      if (lab != 0 && lab != code) alive_[ell] = 0;
    }
    if (!last_col) {
      const unsigned next = (words_[ell * stride_ + wi_next] >> sh_next) & 3u;
      w_after_[ell] = static_cast<std::int16_t>(w_after_[ell] - (next != 0));
    }
  });

  current_row_.push_back(label);
  ++col_;
  if (col_ == n_) finish_row();
}

void ObservableTracker::finish_row() {
  for (std::size_t ell = 0; ell < count_; ++ell)
    if (alive_[ell]) ++hits_[ell];
  rows_.emplace_back(current_row_);
  current_row_.clear();

  if (rows_.size() == cfg_.budget) {
    done_ = true;
  } else if (cfg_.mode == CostMode::BudgetFree && cfg_.stop_min_hits &&
             min_hits() >= *cfg_.stop_min_hits) {
    done_ = true;
  }
  if (!done_) begin_row();
}

double ObservableTracker::v_value(std::size_t ell) const {
  return cfg_.half_rate() * static_cast<double>(hits_[ell]);
}

int ObservableTracker::min_hits() const {
  int m = hits_.empty() ? 0 : hits_[0];
  for (int h : hits_) m = std::min(m, h);
  return m;
}

bool ObservableTracker::stop_satisfied() const {
  if (cfg_.mode != CostMode::BudgetFree || !cfg_.stop_min_hits) return true;
  return min_hits() >= *cfg_.stop_min_hits;
}

Schedule derandomize(const ObservableSet& set, const DerandConfig& config) {
  config.validate();

  // Weighted mode cannot carry zero-coefficient terms (their weight divisor
  // would vanish); they also contribute nothing to an energy, so drop them.
  std::vector<std::size_t> kept;
  std::optional<ObservableSet> filtered;
  const ObservableSet* effective = &set;
  if (config.weighted) {
    std::vector<PauliObservable> remaining;
    for (std::size_t ell = 0; ell < set.size(); ++ell) {
      if (set[ell].coefficient() != 0.0) {
        kept.push_back(ell);
        remaining.push_back(set[ell]);
      }
    }
    if (remaining.empty())
      throw std::invalid_argument("weighted mode needs at least one nonzero coefficient");
    if (remaining.size() < set.size()) {
      std::cerr << "note: ignoring " << set.size() - remaining.size()
                << " zero-coefficient term(s) in weighted mode\n";
      filtered.emplace(std::move(remaining));
      effective = &*filtered;
    }
  }

  ObservableTracker tracker(*effective, config);
  while (!tracker.done()) tracker.assign(tracker.best_label());

  Schedule schedule;
  schedule.rows = tracker.rows();
  schedule.method = "derandomized";
  schedule.config = config;
  schedule.stop_satisfied = tracker.stop_satisfied();

  schedule.hit_counts.resize(set.size());
  if (filtered) {
    schedule.dropped_terms = set.size() - kept.size();
    std::vector<char> tracked(set.size(), 0);
    for (std::size_t i = 0; i < kept.size(); ++i) {
      schedule.hit_counts[kept[i]] = tracker.hits(i);
      tracked[kept[i]] = 1;
    }
    for (std::size_t ell = 0; ell < set.size(); ++ell)
      if (!tracked[ell]) schedule.hit_counts[ell] = hit_count(set[ell], schedule.rows);
  } else {
    for (std::size_t ell = 0; ell < set.size(); ++ell) schedule.hit_counts[ell] = tracker.hits(ell);
  }

  if (config.mode == CostMode::FixedBudget) {
    schedule.confidence = confidence_bound(set, schedule.rows, config.params);
    schedule.expected_confidence = expected_confidence_bound(set, config.budget, config.params);
  } else {
    schedule.v_values.resize(set.size());
    for (std::size_t ell = 0; ell < set.size(); ++ell)
      schedule.v_values[ell] = config.half_rate() * static_cast<double>(schedule.hit_counts[ell]);
  }
  return schedule;
}

Schedule randomized_schedule(std::size_t qubits, std::size_t rows, std::uint64_t seed) {
  if (qubits == 0) throw std::invalid_argument("qubit count must be at least 1");
  RngStream rng(seed);
  Schedule schedule;
  schedule.method = "randomized";
  schedule.seed = seed;
  schedule.rows.reserve(rows);
  std::vector<Pauli> labels(qubits);
  for (std::size_t m = 0; m < rows; ++m) {
    for (std::size_t k = 0; k < qubits; ++k)
      labels[k] = static_cast<Pauli>(1 + rng.bounded(3));
    schedule.rows.emplace_back(labels);
  }
  return schedule;
}

double label_cost_reference(const ObservableSet& set, const PartialAssignment& partial,
                            Pauli candidate, const DerandConfig& config) {
  config.validate();
  partial.validate(set.qubits());
  if (candidate == Pauli::I)
    throw std::invalid_argument("measurement labels come from {X, Y, Z}");
  if (partial.current_row.size() >= set.qubits())
    throw std::logic_error("current row is already fully assigned");
  if (partial.completed_rows.size() >= config.budget)
    throw std::logic_error("no rows left to assign within the budget");

  PartialAssignment next = partial;
  next.current_row.push_back(candidate);
  next.total_budget = config.budget;

  if (config.mode == CostMode::FixedBudget)
    return conditional_expected_bound(set, next, config.params);

  // Budget-free cost: per observable exp(-V / w) where V collects eta/2 per
  // past hit plus the log of the current row's hit prospects; no factor for
  // rows beyond the current one.
  double max_abs = 1.0;
  if (config.weighted) {
    max_abs = 0.0;
    for (const auto& o : set) max_abs = std::max(max_abs, std::abs(o.coefficient()));
  }
  const double nu = config.nu();
  const std::size_t assigned = next.current_row.size();
  double sum = 0.0;
  for (const auto& o : set) {
    double v = config.half_rate() * hit_count(o, next.completed_rows);
    bool prefix_alive = true;
    for (std::size_t k = 0; k < assigned && prefix_alive; ++k)
      prefix_alive = label_hits(o.label(k), next.current_row[k]);
    if (prefix_alive)
      v -= std::log1p(-nu * std::pow(1.0 / 3.0, o.suffix_weight(assigned)));
    const double inv_w = config.weighted ? max_abs / std::abs(o.coefficient()) : 1.0;
    sum += std::exp(-v * inv_w);
  }
  return sum;
}

Schedule derandomize_reference(const ObservableSet& set, const DerandConfig& config) {
  config.validate();
  if (config.weighted)
    for (const auto& o : set)
      if (o.coefficient() == 0.0)
        throw std::invalid_argument("reference run expects zero-coefficient terms pre-filtered");

  PartialAssignment partial;
  partial.total_budget = config.budget;
  Schedule schedule;
  schedule.method = "derandomized";
  schedule.config = config;

  while (partial.completed_rows.size() < config.budget) {
    partial.current_row.clear();
    for (std::size_t k = 0; k < set.qubits(); ++k) {
      double scores[4] = {0.0, 0.0, 0.0, 0.0};
      for (int code = 1; code <= 3; ++code)
        scores[code] =
            label_cost_reference(set, partial, static_cast<Pauli>(code), config);
      partial.current_row.push_back(detail::pick_label(scores));
    }
    partial.completed_rows.emplace_back(partial.current_row);
    partial.current_row.clear();

    if (config.mode == CostMode::BudgetFree && config.stop_min_hits) {
      int min_hits = std::numeric_limits<int>::max();
      for (const auto& o : set)
        min_hits = std::min(min_hits, hit_count(o, partial.completed_rows));
      if (min_hits >= *config.stop_min_hits) break;
    }
  }

  schedule.rows = partial.completed_rows;
  schedule.hit_counts = hit_counts(set, schedule.rows);
  if (config.mode == CostMode::FixedBudget) {
    schedule.confidence = confidence_bound(set, schedule.rows, config.params);
    schedule.expected_confidence = expected_confidence_bound(set, config.budget, config.params);
  } else {
    schedule.v_values.resize(set.size());
    for (std::size_t ell = 0; ell < set.size(); ++ell)
      schedule.v_values[ell] = config.half_rate() * schedule.hit_counts[ell];
    if (config.stop_min_hits) {
      int min_hits = std::numeric_limits<int>::max();
      for (int h : schedule.hit_counts) min_hits = std::min(min_hits, h);
      schedule.stop_satisfied = min_hits >= *config.stop_min_hits;
    }
  }
  return schedule;
}

}  // namespace derand
