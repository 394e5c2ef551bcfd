#include "derand/estimator.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "derand/parallel.hpp"

namespace derand {

OutcomeRecord::OutcomeRecord(MeasurementBasis basis_in, std::vector<int> signs_in)
    : basis(std::move(basis_in)), signs(std::move(signs_in)) {
  if (signs.size() != basis.size())
    throw dimension_error("outcome signs must match the basis length");
  for (int s : signs)
    if (s != 1 && s != -1) throw std::invalid_argument("outcome signs must be +1 or -1");
}

namespace {

// One bit per qubit; bit k set means sign -1 at position k.
std::vector<std::uint64_t> sign_mask(const std::vector<int>& signs) {
  std::vector<std::uint64_t> mask((signs.size() + 63) / 64, 0);
  for (std::size_t k = 0; k < signs.size(); ++k)
    if (signs[k] < 0) mask[k / 64] |= std::uint64_t{1} << (k % 64);
  return mask;
}

// One bit per qubit; bit k set means the observable acts on qubit k.
std::vector<std::uint64_t> support_mask(const PauliObservable& o) {
  std::vector<std::uint64_t> mask((o.size() + 63) / 64, 0);
  for (std::size_t k = 0; k < o.size(); ++k)
    if (o.label(k) != Pauli::I) mask[k / 64] |= std::uint64_t{1} << (k % 64);
  return mask;
}

}  // namespace

EstimateReport estimate_all(const ObservableSet& set, std::span<const OutcomeRecord> outcomes,
                            const CostParams& params) {
  if (outcomes.empty()) throw std::invalid_argument("no outcome records to estimate from");
  for (const auto& record : outcomes)
    if (record.basis.size() != set.qubits())
      throw dimension_error("outcome record length does not match the observable set");

  const std::size_t count = set.size();
  std::vector<std::vector<std::uint64_t>> signs;
  signs.reserve(outcomes.size());
  for (const auto& record : outcomes) signs.push_back(sign_mask(record.signs));

  EstimateReport report;
  report.per_observable.resize(count);
  report.epsilon = params.epsilon();
  report.delta = params.delta();

  par::parallel_for(count, [&](std::size_t ell) {
    const auto& o = set[ell];
    const auto support = support_mask(o);
    long long sum = 0;
    int hit_count = 0;
    for (std::size_t m = 0; m < outcomes.size(); ++m) {
      if (!hits(o, outcomes[m].basis)) continue;
      ++hit_count;
      int parity = 0;
      for (std::size_t w = 0; w < support.size(); ++w)
        parity ^= std::popcount(signs[m][w] & support[w]) & 1;
      sum += parity ? -1 : 1;
    }
    auto& est = report.per_observable[ell];
    est.hits = hit_count;
    est.never_hit = hit_count == 0;
    est.value = hit_count == 0 ? 0.0 : static_cast<double>(sum) / hit_count;
  });

  const double rate = params.epsilon() * params.epsilon() / 2.0;
  report.never_hit_count = 0;
  for (const auto& est : report.per_observable)
    if (est.never_hit) ++report.never_hit_count;
  report.energy = par::blocked_sum(
      count, [&](std::size_t ell) { return set[ell].coefficient() * report.per_observable[ell].value; });
  report.energy_error_bound = par::blocked_sum(
      count, [&](std::size_t ell) { return std::abs(set[ell].coefficient()) * params.epsilon(); });
  report.confidence = par::blocked_sum(
      count, [&](std::size_t ell) { return std::exp(-rate * report.per_observable[ell].hits); });
  report.certified = report.confidence <= params.delta() / 2.0;
  return report;
}

double rmse(std::span<const double> estimates, double reference) {
  if (estimates.empty()) throw std::invalid_argument("rmse needs at least one estimate");
  double sum = 0.0;
  for (double e : estimates) sum += (e - reference) * (e - reference);
  return std::sqrt(sum / static_cast<double>(estimates.size()));
}

}  // namespace derand
