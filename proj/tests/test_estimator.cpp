#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "derand/confidence.hpp"
#include "derand/derandomizer.hpp"
#include "derand/estimator.hpp"
#include "derand/pauli.hpp"
#include "derand/rng.hpp"
#include "derand/simulator.hpp"
#include "oracles.hpp"

using namespace derand;
using oracles::cdouble;

namespace {

PauliObservable obs(const std::string& text) { return PauliObservable::parse(text); }
MeasurementBasis basis(const std::string& text) { return MeasurementBasis::parse(text); }

OutcomeRecord rec(const std::string& basis_text, const std::vector<int>& signs) {
  return OutcomeRecord(basis(basis_text), signs);
}

StateVector random_state(RngStream& rng, std::size_t qubits) {
  std::vector<cdouble> amps(std::size_t{1} << qubits);
  double norm2 = 0.0;
  for (auto& a : amps) {
    a = cdouble(rng.uniform01() - 0.5, rng.uniform01() - 0.5);
    norm2 += std::norm(a);
  }
  for (auto& a : amps) a /= std::sqrt(norm2);
  return StateVector::from_amplitudes(std::move(amps));
}

MeasurementBasis random_basis(RngStream& rng, std::size_t qubits) {
  std::vector<Pauli> labels(qubits);
  for (auto& l : labels) l = static_cast<Pauli>(1 + rng.bounded(3));
  return MeasurementBasis(labels);
}

// E[product of signs over the support of o | row p] by exact enumeration of
// the 2^n outcome probabilities.
double exact_row_expectation(const StateVector& state, const MeasurementBasis& p,
                             const PauliObservable& o) {
  const auto dist = exact_outcome_distribution(state, p);
  const std::size_t qubits = state.qubits();
  double mean = 0.0;
  for (std::size_t outcome = 0; outcome < dist.size(); ++outcome) {
    int product = 1;
    for (std::size_t j = 0; j < qubits; ++j)
      if (o.label(j) != Pauli::I && ((outcome >> (qubits - 1 - j)) & 1)) product = -product;
    mean += dist[outcome] * product;
  }
  return mean;
}

}  // namespace

TEST_CASE("outcome records validate their signs") {
  CHECK_THROWS_AS(rec("ZZ", {1}), dimension_error);
  CHECK_THROWS_AS(rec("Z", {2}), std::invalid_argument);
}

TEST_CASE("averaging three single-qubit records") {
  const ObservableSet set({obs("Z")});
  const std::vector<OutcomeRecord> outcomes = {rec("Z", {1}), rec("Z", {-1}), rec("Z", {1})};
  const auto report = estimate_all(set, outcomes, CostParams(0.9));
  CHECK(report.per_observable[0].value == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(report.per_observable[0].hits == 3);
  CHECK(report.energy == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("unhit observables report zero loudly") {
  const ObservableSet set({obs("XX")});
  const std::vector<OutcomeRecord> outcomes = {rec("ZZ", {1, 1})};
  const auto report = estimate_all(set, outcomes, CostParams(0.9));
  CHECK(report.per_observable[0].value == 0.0);
  CHECK(report.per_observable[0].never_hit);
  CHECK(report.never_hit_count == 1);
}

TEST_CASE("empty outcome lists are rejected") {
  const ObservableSet set({obs("Z")});
  CHECK_THROWS_AS(estimate_all(set, {}, CostParams(0.9)), std::invalid_argument);
}

TEST_CASE("GHZ(3) parities estimate to exactly one") {
  const ObservableSet set({obs("XXX"), obs("ZZI")});
  const auto ghz = StateVector::ghz(3);
  RngStream rng(12);
  std::vector<OutcomeRecord> outcomes;
  for (int m = 0; m < 40; ++m) {
    outcomes.push_back(measure(ghz, basis("XXX"), rng));
    outcomes.push_back(measure(ghz, basis("ZZZ"), rng));
  }
  const auto report = estimate_all(set, outcomes, CostParams(0.9));
  CHECK(report.per_observable[0].value == 1.0);  // X-parity of GHZ is deterministic
  CHECK(report.per_observable[1].value == 1.0);  // Z-pair parity too
  CHECK(report.per_observable[0].hits == 40);
  CHECK(report.per_observable[1].hits == 40);
}

TEST_CASE("identity terms contribute their coefficient exactly") {
  const ObservableSet set({obs("0.5 II"), obs("-2 ZZ")});
  const std::vector<OutcomeRecord> outcomes = {rec("ZZ", {1, 1}), rec("ZZ", {-1, -1})};
  const auto report = estimate_all(set, outcomes, CostParams(0.9));
  CHECK(report.per_observable[0].value == 1.0);
  CHECK(report.per_observable[0].hits == 2);
  CHECK(report.energy == doctest::Approx(0.5 - 2.0).epsilon(1e-15));
  CHECK(report.energy_error_bound == doctest::Approx(2.5 * 0.9).epsilon(1e-15));
}

TEST_CASE("sign products use the support only") {
  const ObservableSet set({obs("IZ")});
  const std::vector<OutcomeRecord> outcomes = {rec("ZZ", {-1, 1})};
  const auto report = estimate_all(set, outcomes, CostParams(0.9));
  CHECK(report.per_observable[0].value == 1.0);  // first sign is outside the support
}

TEST_CASE("estimates are unbiased against the exact distribution") {
  RngStream rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t qubits = 1 + rng.bounded(3);
    const auto state = random_state(rng, qubits);
    std::vector<Pauli> labels(qubits);
    for (auto& l : labels) l = static_cast<Pauli>(rng.bounded(4));
    const PauliObservable o(labels);

    std::vector<MeasurementBasis> rows;
    for (int m = 0; m < 6; ++m) rows.push_back(random_basis(rng, qubits));

    double expectation_of_estimate = 0.0;
    int hit_rows = 0;
    for (const auto& row : rows) {
      if (!hits(o, row)) continue;
      ++hit_rows;
      expectation_of_estimate += exact_row_expectation(state, row, o);
    }
    if (hit_rows == 0) continue;
    expectation_of_estimate /= hit_rows;
    const double truth = exact_expectation(state, o);
    CHECK(expectation_of_estimate == doctest::Approx(truth).epsilon(1e-10));
  }
}

TEST_CASE("marginalized products reproduce the expectation for hitting bases") {
  RngStream rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t qubits = 1 + rng.bounded(3);
    const auto state = random_state(rng, qubits);
    const auto p = random_basis(rng, qubits);
    // Build an observable hit by p: erase a random subset of labels.
    std::vector<Pauli> labels(qubits);
    for (std::size_t j = 0; j < qubits; ++j)
      labels[j] = rng.bounded(2) ? p.label(j) : Pauli::I;
    const PauliObservable o(labels);
    REQUIRE(hits(o, p));
    CHECK(exact_row_expectation(state, p, o) ==
          doctest::Approx(exact_expectation(state, o)).epsilon(1e-10));
  }
}

TEST_CASE("certification follows the hit-count arithmetic") {
  const double epsilon = 0.4;
  const double delta = 0.05;
  const ObservableSet set({obs("Z"), obs("X")});
  // h >= (2 / eps^2) ln(2L / delta) certifies; one hit fewer must not.
  const int needed = static_cast<int>(
      std::ceil(2.0 / (epsilon * epsilon) * std::log(2.0 * set.size() / delta)));

  std::vector<OutcomeRecord> outcomes;
  for (int i = 0; i < needed; ++i) {
    outcomes.push_back(rec("Z", {1}));
    outcomes.push_back(rec("X", {1}));
  }
  const auto certified = estimate_all(set, outcomes, CostParams(epsilon, delta));
  CHECK(certified.certified);
  CHECK(certified.confidence <= delta / 2.0);

  std::vector<OutcomeRecord> fewer(outcomes.begin(), outcomes.end() - 2);
  const auto uncertified = estimate_all(set, fewer, CostParams(epsilon, delta));
  CHECK_FALSE(uncertified.certified);
}

TEST_CASE("rmse") {
  const std::vector<double> ones = {1.0, 1.0, 1.0};
  CHECK(rmse(ones, 1.0) == 0.0);
  const std::vector<double> split = {0.0, 2.0};
  CHECK(rmse(split, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  const std::vector<double> single = {1.5};
  CHECK(rmse(single, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(rmse({}, 0.0), std::invalid_argument);
}

TEST_CASE("small-scale certified schedules keep the failure rate below delta") {
  // A compact version of the soundness experiment: GHZ(2), two parities,
  // schedule balanced enough that Conf <= delta/2 at epsilon 0.35.
  const double epsilon = 0.35;
  const double delta = 0.1;
  const CostParams params(epsilon, delta);
  const ObservableSet set({obs("XX"), obs("ZZ")});
  const auto schedule = derandomize(set, DerandConfig::fixed_budget(260, params));
  REQUIRE(confidence_bound(set, schedule.rows, params) <= delta / 2.0);

  // |+> x |0>: both parities are genuine coin-flip averages.
  const std::vector<BlochSpec> specs = {{Pauli::X, 1}, {Pauli::Z, 1}};
  const auto state = StateVector::product_state(specs);
  const double truth_xx = exact_expectation(state, set[0]);
  const double truth_zz = exact_expectation(state, set[1]);

  RngStream root(15);
  int failures = 0;
  const int repetitions = 400;
  for (int r = 0; r < repetitions; ++r) {
    RngStream rng = root.derive(r);
    std::vector<OutcomeRecord> outcomes;
    outcomes.reserve(schedule.rows.size());
    for (const auto& row : schedule.rows) outcomes.push_back(measure(state, row, rng));
    const auto report = estimate_all(set, outcomes, params);
    const double dev = std::max(std::abs(report.per_observable[0].value - truth_xx),
                                std::abs(report.per_observable[1].value - truth_zz));
    if (dev > epsilon) ++failures;
  }
  CHECK(failures <= static_cast<int>(delta * repetitions));
}
