// Command-line front end: derandomize / simulate / estimate / confidence /
// bench, wired to the line-oriented file formats in derand/io.hpp.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "derand/confidence.hpp"
#include "derand/derandomizer.hpp"
#include "derand/estimator.hpp"
#include "derand/io.hpp"
#include "derand/parallel.hpp"
#include "derand/pauli.hpp"
#include "derand/rng.hpp"
#include "derand/simulator.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

constexpr const char* kVersion = "0.1.0";

using derand::CostParams;
using derand::DerandConfig;
using derand::MeasurementBasis;
using derand::ObservableSet;
using derand::OutcomeRecord;
using derand::Pauli;
using derand::PauliObservable;
using derand::RngStream;
using derand::Schedule;
using derand::StateVector;

class Stopwatch {
 public:
  std::uint64_t elapsed_ms() const {
    const auto now = std::chrono::steady_clock::now();
    return static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(now - start_).count());
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

derand::io::Manifest base_manifest(const std::string& subcommand) {
  derand::io::Manifest m;
  m.set("artifact_version", std::string(kVersion));
  m.set("subcommand", subcommand);
  m.set("threads", static_cast<std::uint64_t>(derand::par::max_threads()));
  return m;
}

// --- derandomize ----------------------------------------------------------

struct DerandArgs {
  std::string observables_path;
  std::string out_path;
  std::optional<std::size_t> budget;
  std::optional<int> min_hits;
  std::optional<std::size_t> cap;
  std::optional<double> epsilon;
  std::optional<double> eta;
  double delta = 0.05;
  bool weighted = false;
};

int run_derandomize(const DerandArgs& args) {
  Stopwatch watch;
  if (args.budget.has_value() == args.min_hits.has_value())
    throw CLI::ValidationError("derandomize", "give exactly one of --budget or --min-hits");

  DerandConfig config;
  if (args.budget) {
    if (!args.epsilon)
      throw CLI::ValidationError("derandomize", "--budget mode requires an explicit --epsilon");
    if (args.eta)
      throw CLI::ValidationError("derandomize", "--eta belongs to --min-hits mode");
    if (args.weighted)
      throw CLI::ValidationError("derandomize", "--weighted belongs to --min-hits mode");
    config = DerandConfig::fixed_budget(*args.budget, CostParams(*args.epsilon, args.delta));
  } else {
    if (!args.cap)
      throw CLI::ValidationError("derandomize", "--min-hits mode requires --cap");
    if (args.epsilon)
      throw CLI::ValidationError("derandomize", "--epsilon belongs to --budget mode");
    config = DerandConfig::budget_free(*args.cap, args.eta.value_or(0.9), args.weighted,
                                       *args.min_hits);
  }

  const ObservableSet set = derand::io::read_observables_file(args.observables_path);
  const Schedule schedule = derandomize(set, config);
  derand::io::write_schedule_file(args.out_path, schedule.rows);

  int min_hits = schedule.hit_counts.empty() ? 0 : schedule.hit_counts.front();
  for (int h : schedule.hit_counts) min_hits = std::min(min_hits, h);

  auto manifest = base_manifest("derandomize");
  manifest.set("observables", args.observables_path);
  manifest.set("out", args.out_path);
  manifest.set("mode", args.budget ? "fixed-budget" : "budget-free");
  if (args.budget) {
    manifest.set("budget", static_cast<std::uint64_t>(*args.budget));
    manifest.set("epsilon", config.params.epsilon());
    manifest.set("delta", config.params.delta());
    manifest.set("nu", config.params.nu());
    manifest.set("confidence", schedule.confidence);
    manifest.set("expected_confidence", schedule.expected_confidence);
  } else {
    manifest.set("cap", static_cast<std::uint64_t>(*args.cap));
    manifest.set("min_hits_target", static_cast<std::uint64_t>(*args.min_hits));
    manifest.set("eta", config.eta);
    manifest.set("nu", config.nu());
    manifest.set("weighted", args.weighted ? "true" : "false");
    manifest.set("stop_satisfied", schedule.stop_satisfied ? "true" : "false");
    if (schedule.dropped_terms > 0)
      manifest.set("dropped_zero_coefficient_terms",
                   static_cast<std::uint64_t>(schedule.dropped_terms));
  }
  manifest.set("rows", static_cast<std::uint64_t>(schedule.rows.size()));
  manifest.set("min_hit_count", static_cast<std::uint64_t>(std::max(0, min_hits)));
  manifest.set("duration_ms", watch.elapsed_ms());
  derand::io::write_manifest_file(args.out_path, manifest);

  std::cout << "rows " << schedule.rows.size() << "\n";
  if (args.budget) {
    std::cout << "confidence " << derand::format_double(schedule.confidence) << "\n"
              << "expected_confidence " << derand::format_double(schedule.expected_confidence)
              << "\n";
  } else {
    std::cout << "min_hit_count " << min_hits << "\n"
              << "stop_satisfied " << (schedule.stop_satisfied ? "true" : "false") << "\n";
  }
  return 0;
}

// --- simulate --------------------------------------------------------------

StateVector state_from_spec(const std::string& spec) {
  const std::size_t colon = spec.find(':');
  if (colon == std::string::npos)
    throw CLI::ValidationError("--state", "expected KIND:ARG, e.g. ghz:3 or file:state.txt");
  const std::string kind = spec.substr(0, colon);
  const std::string arg = spec.substr(colon + 1);
  if (kind == "file") return derand::io::read_state_file(arg);
  if (kind == "product") {
    if (arg.empty() || arg.size() % 2 != 0)
      throw CLI::ValidationError("--state", "product spec needs axis/sign pairs like Z+X-");
    std::vector<derand::BlochSpec> specs;
    for (std::size_t i = 0; i < arg.size(); i += 2) {
      const auto axis = derand::pauli_from_char(arg[i]);
      if (!axis || *axis == Pauli::I)
        throw CLI::ValidationError("--state", std::string("bad product axis '") + arg[i] + "'");
      if (arg[i + 1] != '+' && arg[i + 1] != '-')
        throw CLI::ValidationError("--state", std::string("bad product sign '") + arg[i + 1] + "'");
      specs.push_back({*axis, arg[i + 1] == '+' ? 1 : -1});
    }
    if (specs.empty()) throw CLI::ValidationError("--state", "empty product spec");
    return StateVector::product_state(specs);
  }
  long long parsed = 0;
  try {
    parsed = std::stoll(arg);
  } catch (const std::exception&) {
    throw CLI::ValidationError("--state", "qubit count '" + arg + "' is not a number");
  }
  if (parsed < 1)
    throw CLI::ValidationError("--state", "qubit count must be at least 1");
  const auto qubits = static_cast<std::size_t>(parsed);
  if (kind == "zero") return StateVector::zero_state(qubits);
  if (kind == "uniform") return StateVector::uniform_superposition(qubits);
  if (kind == "ghz") return StateVector::ghz(qubits);
  throw CLI::ValidationError("--state", "unknown state kind '" + kind + "'");
}

struct SimulateArgs {
  std::string schedule_path;
  std::string state_spec;
  std::string out_path;
  std::uint64_t seed = 1;
};

int run_simulate(const SimulateArgs& args) {
  Stopwatch watch;
  const auto rows = derand::io::read_schedule_file(args.schedule_path);
  const StateVector state = state_from_spec(args.state_spec);

  RngStream root(args.seed);
  std::vector<OutcomeRecord> outcomes;
  outcomes.reserve(rows.size());
  for (std::size_t m = 0; m < rows.size(); ++m) {
    RngStream stream = root.derive(m);
    outcomes.push_back(measure(state, rows[m], stream));
  }
  derand::io::write_outcomes_file(args.out_path, outcomes);

  auto manifest = base_manifest("simulate");
  manifest.set("schedule", args.schedule_path);
  manifest.set("state", args.state_spec);
  manifest.set("out", args.out_path);
  manifest.set("seed", args.seed);
  manifest.set("rows", static_cast<std::uint64_t>(rows.size()));
  manifest.set("qubits", static_cast<std::uint64_t>(state.qubits()));
  manifest.set("duration_ms", watch.elapsed_ms());
  derand::io::write_manifest_file(args.out_path, manifest);

  std::cout << "records " << outcomes.size() << "\n";
  return 0;
}

// --- estimate ---------------------------------------------------------------

struct EstimateArgs {
  std::string observables_path;
  std::string outcomes_path;
  double epsilon = 0.9;
  double delta = 0.05;
  std::string out_path;
};

void render_report_kv(std::ostream& out, const ObservableSet& set,
                      const derand::EstimateReport& report) {
  out << "observables " << set.size() << "\n"
      << "epsilon " << derand::format_double(report.epsilon) << "\n"
      << "delta " << derand::format_double(report.delta) << "\n"
      << "never_hit_count " << report.never_hit_count << "\n"
      << "energy " << derand::format_double(report.energy) << "\n"
      << "energy_error_bound " << derand::format_double(report.energy_error_bound) << "\n"
      << "confidence " << derand::format_double(report.confidence) << "\n"
      << "certified " << (report.certified ? "true" : "false") << "\n";
  for (std::size_t ell = 0; ell < set.size(); ++ell) {
    const auto& est = report.per_observable[ell];
    out << "estimate." << ell << ' ' << derand::format_double(est.value) << "\n"
        << "hits." << ell << ' ' << est.hits << "\n";
    if (est.never_hit) out << "never_hit." << ell << " true\n";
  }
}

int run_estimate(const EstimateArgs& args) {
  Stopwatch watch;
  const ObservableSet set = derand::io::read_observables_file(args.observables_path);
  const auto outcomes = derand::io::read_outcomes_file(args.outcomes_path);
  const CostParams params(args.epsilon, args.delta);
  const auto report = estimate_all(set, outcomes, params);

  // Text report on stdout; key/value document via --out.
  std::cout << "records " << outcomes.size() << ", observables " << set.size() << "\n";
  if (report.never_hit_count > 0)
    std::cout << "WARNING: " << report.never_hit_count
              << " observable(s) were never hit; their estimates are 0\n";
  std::cout << "energy " << derand::format_double(report.energy) << "\n"
            << "energy_error_bound " << derand::format_double(report.energy_error_bound)
            << "  (sum_l |coeff_l| * epsilon)\n"
            << "confidence " << derand::format_double(report.confidence) << "  (threshold "
            << derand::format_double(report.delta / 2.0) << ")\n"
            << "certified " << (report.certified ? "true" : "false") << "\n";
  for (std::size_t ell = 0; ell < set.size(); ++ell) {
    const auto& est = report.per_observable[ell];
    std::cout << "  [" << ell << "] " << set[ell].labels_str() << "  estimate "
              << derand::format_double(est.value) << "  hits " << est.hits
              << (est.never_hit ? "  NEVER HIT" : "") << "\n";
  }

  if (!args.out_path.empty()) {
    std::ofstream out(args.out_path);
    if (!out) throw std::runtime_error("cannot open '" + args.out_path + "' for writing");
    render_report_kv(out, set, report);

    auto manifest = base_manifest("estimate");
    manifest.set("observables", args.observables_path);
    manifest.set("outcomes", args.outcomes_path);
    manifest.set("out", args.out_path);
    manifest.set("epsilon", args.epsilon);
    manifest.set("delta", args.delta);
    manifest.set("duration_ms", watch.elapsed_ms());
    derand::io::write_manifest_file(args.out_path, manifest);
  }
  return 0;
}

// --- confidence --------------------------------------------------------------

struct ConfidenceArgs {
  std::string observables_path;
  std::string schedule_path;
  double epsilon = 0.9;
  double delta = 0.05;
  std::string out_path;
};

int run_confidence(const ConfidenceArgs& args) {
  const ObservableSet set = derand::io::read_observables_file(args.observables_path);
  const auto rows = derand::io::read_schedule_file(args.schedule_path);
  const CostParams params(args.epsilon, args.delta);

  const double conf = confidence_bound(set, rows, params);
  const double expected = expected_confidence_bound(set, rows.size(), params);
  const auto hits = hit_counts(set, rows);

  std::ostringstream text;
  text << "rows " << rows.size() << "\n"
       << "epsilon " << derand::format_double(params.epsilon()) << "\n"
       << "confidence " << derand::format_double(conf) << "\n"
       << "expected_confidence " << derand::format_double(expected) << "\n";
  for (std::size_t ell = 0; ell < set.size(); ++ell)
    text << "hits." << ell << ' ' << hits[ell] << "\n";

  std::cout << text.str();
  if (!args.out_path.empty()) {
    std::ofstream out(args.out_path);
    if (!out) throw std::runtime_error("cannot open '" + args.out_path + "' for writing");
    out << text.str();
  }
  return 0;
}

// --- bench --------------------------------------------------------------------

struct BenchArgs {
  std::string hamiltonian_path;
  std::vector<std::size_t> budgets;
  std::size_t trials = 10;
  std::uint64_t seed = 1;
  std::string methods = "derand,random";
  double epsilon = 0.9;
  double delta = 0.05;
  double eta = 0.9;
  bool unweighted = false;
  bool fixed_budget = false;
  std::size_t qubit_cap = 16;
  std::string out_path;
};

struct BenchRow {
  std::size_t budget = 0;
  std::string method;
  double rmse_value = 0.0;
  double min_hits = 0.0;
  double median_hits = 0.0;
};

double median_of(std::vector<int> values) {
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return (values[mid - 1] + values[mid]) / 2.0;
}

int run_bench(const BenchArgs& args) {
  Stopwatch watch;
  if (args.budgets.empty())
    throw CLI::ValidationError("bench", "give at least one --budget");
  if (args.trials == 0) throw CLI::ValidationError("bench", "--trials must be positive");

  std::vector<std::string> methods;
  {
    std::stringstream ss(args.methods);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item != "derand" && item != "random")
        throw CLI::ValidationError("bench", "unknown method '" + item + "'");
      methods.push_back(item);
    }
    if (methods.empty()) throw CLI::ValidationError("bench", "no methods selected");
  }

  const ObservableSet hamiltonian = derand::io::read_observables_file(args.hamiltonian_path);
  if (hamiltonian.qubits() > args.qubit_cap)
    throw derand::capacity_error("Hamiltonian has " + std::to_string(hamiltonian.qubits()) +
                                 " qubits, above the bench cap of " +
                                 std::to_string(args.qubit_cap) + " (see --qubit-cap)");

  derand::GroundStateOptions gs_options;
  gs_options.qubit_cap = args.qubit_cap;
  const auto ground = ground_state(hamiltonian, gs_options);
  const CostParams params(args.epsilon, args.delta);

  // The greedy schedule is deterministic, so all trials of one (file,
  // config) share it; cache by content digest in case budgets repeat.
  const std::uint64_t content_hash = [&] {
    std::ifstream in(args.hamiltonian_path, std::ios::binary);
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    char c;
    while (in.get(c)) h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ull;
    return h;
  }();
  std::map<std::string, Schedule> derand_cache;
  auto derand_schedule = [&](std::size_t budget) -> const Schedule& {
    std::string key = std::to_string(content_hash) + ":" +
                      std::to_string(budget) + ":" + (args.fixed_budget ? "fixed" : "free") +
                      ":" + (args.unweighted ? "plain" : "weighted") + ":" +
                      derand::format_double(args.fixed_budget ? args.epsilon : args.eta);
    auto it = derand_cache.find(key);
    if (it != derand_cache.end()) return it->second;
    DerandConfig config =
        args.fixed_budget
            ? DerandConfig::fixed_budget(budget, params)
            : DerandConfig::budget_free(budget, args.eta, !args.unweighted);
    return derand_cache.emplace(key, derandomize(hamiltonian, config)).first->second;
  };

  RngStream root(args.seed);
  std::vector<BenchRow> table;

  for (std::size_t b = 0; b < args.budgets.size(); ++b) {
    const std::size_t budget = args.budgets[b];
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
      const std::string& method = methods[mi];
      const bool randomized = method == "random";
      const Schedule& shared_schedule = derand_schedule(budget);  // one per (file, config)
      std::vector<double> energies(args.trials);
      std::vector<double> trial_min(args.trials), trial_median(args.trials);

      // Trials are independent experiments with their own generator streams;
      // results land in per-trial slots, so the table does not depend on
      // execution order.
      std::exception_ptr failure;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
      for (std::ptrdiff_t ti = 0; ti < static_cast<std::ptrdiff_t>(args.trials); ++ti) {
        try {
          const auto t = static_cast<std::size_t>(ti);
          const std::uint64_t stream_id = ((b * 2 + (randomized ? 1 : 0)) << 20) + t;
          RngStream trial_rng = root.derive(stream_id);

          const Schedule* schedule = &shared_schedule;
          Schedule random_schedule_storage;
          if (randomized) {
            random_schedule_storage =
                derand::randomized_schedule(hamiltonian.qubits(), budget, trial_rng.next());
            schedule = &random_schedule_storage;
          }

          std::vector<OutcomeRecord> outcomes;
          outcomes.reserve(schedule->rows.size());
          for (std::size_t m = 0; m < schedule->rows.size(); ++m) {
            RngStream row_rng = trial_rng.derive(m);
            outcomes.push_back(measure(ground.state, schedule->rows[m], row_rng));
          }
          const auto report = estimate_all(hamiltonian, outcomes, params);
          energies[t] = report.energy;

          std::vector<int> hits(hamiltonian.size());
          if (randomized) {
            for (std::size_t ell = 0; ell < hamiltonian.size(); ++ell)
              hits[ell] = report.per_observable[ell].hits;
          } else {
            hits = schedule->hit_counts;
          }
          trial_min[t] = *std::min_element(hits.begin(), hits.end());
          trial_median[t] = median_of(hits);
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
          if (!failure) failure = std::current_exception();
        }
      }
      if (failure) std::rethrow_exception(failure);

      BenchRow row;
      row.budget = budget;
      row.method = method;
      row.rmse_value = derand::rmse(energies, ground.energy);
      row.min_hits = 0.0;
      row.median_hits = 0.0;
      for (std::size_t t = 0; t < args.trials; ++t) {
        row.min_hits += trial_min[t];
        row.median_hits += trial_median[t];
      }
      row.min_hits /= static_cast<double>(args.trials);
      row.median_hits /= static_cast<double>(args.trials);
      table.push_back(row);
    }
  }

  std::ostringstream text;
  text << "# hamiltonian " << args.hamiltonian_path << "\n"
       << "# qubits " << hamiltonian.qubits() << " terms " << hamiltonian.size() << "\n"
       << "# ground_state_energy " << derand::format_double(ground.energy)
       << (ground.degenerate ? " (degenerate)" : "") << "\n"
       << "# columns: budget method trials rmse min_hits median_hits\n";
  for (const auto& row : table)
    text << row.budget << ' ' << row.method << ' ' << args.trials << ' '
         << derand::format_double(row.rmse_value) << ' '
         << derand::format_double(row.min_hits) << ' '
         << derand::format_double(row.median_hits) << "\n";

  std::cout << text.str();
  if (!args.out_path.empty()) {
    std::ofstream out(args.out_path);
    if (!out) throw std::runtime_error("cannot open '" + args.out_path + "' for writing");
    out << text.str();

    auto manifest = base_manifest("bench");
    manifest.set("hamiltonian", args.hamiltonian_path);
    manifest.set("out", args.out_path);
    std::string budgets;
    for (std::size_t b : args.budgets)
      budgets += (budgets.empty() ? "" : ",") + std::to_string(b);
    manifest.set("budgets", budgets);
    manifest.set("trials", static_cast<std::uint64_t>(args.trials));
    manifest.set("seed", args.seed);
    manifest.set("methods", args.methods);
    manifest.set("mode", args.fixed_budget ? "fixed-budget" : "budget-free");
    manifest.set(args.fixed_budget ? "epsilon" : "eta",
                 args.fixed_budget ? args.epsilon : args.eta);
    manifest.set("weighted", args.unweighted ? "false" : "true");
    manifest.set("estimate_epsilon", args.epsilon);
    manifest.set("estimate_delta", args.delta);
    manifest.set("qubit_cap", static_cast<std::uint64_t>(args.qubit_cap));
    manifest.set("duration_ms", watch.elapsed_ms());
    derand::io::write_manifest_file(args.out_path, manifest);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* env = std::getenv("DERAND_THREADS")) {
    const int threads = std::atoi(env);
    if (threads > 0) derand::par::set_threads(threads);
  }

  CLI::App app{"Deterministic Pauli measurement schedules via greedy derandomization"};
  app.require_subcommand(1);

  DerandArgs derand_args;
  auto* cmd_derand = app.add_subcommand(
      "derandomize", "Build a deterministic measurement schedule for an observable file");
  cmd_derand->add_option("observables", derand_args.observables_path, "observable file")
      ->required();
  cmd_derand->add_option("--out", derand_args.out_path, "schedule output file")->required();
  cmd_derand->add_option("--budget", derand_args.budget, "fixed number of rows");
  cmd_derand->add_option("--min-hits", derand_args.min_hits,
                         "stop once every observable is hit this often");
  cmd_derand->add_option("--cap", derand_args.cap, "row cap for --min-hits mode");
  cmd_derand->add_option("--epsilon", derand_args.epsilon, "target accuracy (budget mode)");
  cmd_derand->add_option("--eta", derand_args.eta, "exponent rate (min-hits mode, default 0.9)");
  cmd_derand->add_option("--delta", derand_args.delta, "failure probability (default 0.05)");
  cmd_derand->add_flag("--weighted", derand_args.weighted,
                       "scale the cost by |coefficient| (min-hits mode)");

  SimulateArgs simulate_args;
  auto* cmd_simulate =
      app.add_subcommand("simulate", "Sample measurement outcomes for a schedule");
  cmd_simulate->add_option("schedule", simulate_args.schedule_path, "schedule file")->required();
  cmd_simulate
      ->add_option("--state", simulate_args.state_spec,
                   "zero:N | uniform:N | ghz:N | product:Z+X-... | file:PATH")
      ->required();
  cmd_simulate->add_option("--seed", simulate_args.seed, "random seed (default 1)");
  cmd_simulate->add_option("--out", simulate_args.out_path, "outcome output file")->required();

  EstimateArgs estimate_args;
  auto* cmd_estimate =
      app.add_subcommand("estimate", "Estimate observables and energy from outcomes");
  cmd_estimate->add_option("observables", estimate_args.observables_path, "observable file")
      ->required();
  cmd_estimate->add_option("outcomes", estimate_args.outcomes_path, "outcome file")->required();
  cmd_estimate->add_option("--epsilon", estimate_args.epsilon, "accuracy (default 0.9)");
  cmd_estimate->add_option("--delta", estimate_args.delta, "failure probability (default 0.05)");
  cmd_estimate->add_option("--out", estimate_args.out_path, "key/value report file");

  ConfidenceArgs confidence_args;
  auto* cmd_confidence = app.add_subcommand(
      "confidence", "Confidence bound and hit counts of a schedule against observables");
  cmd_confidence->add_option("observables", confidence_args.observables_path, "observable file")
      ->required();
  cmd_confidence->add_option("schedule", confidence_args.schedule_path, "schedule file")
      ->required();
  cmd_confidence->add_option("--epsilon", confidence_args.epsilon, "accuracy (default 0.9)");
  cmd_confidence->add_option("--delta", confidence_args.delta,
                             "failure probability (default 0.05)");
  cmd_confidence->add_option("--out", confidence_args.out_path, "also write the report here");

  BenchArgs bench_args;
  auto* cmd_bench = app.add_subcommand(
      "bench", "Compare derandomized vs randomized schedules on a Hamiltonian ground state");
  cmd_bench->add_option("hamiltonian", bench_args.hamiltonian_path, "Hamiltonian file")
      ->required();
  cmd_bench->add_option("--budgets,--budget", bench_args.budgets,
                        "measurement budgets (repeat or comma separated)")
      ->delimiter(',');
  cmd_bench->add_option("--trials", bench_args.trials, "independent runs per method (default 10)");
  cmd_bench->add_option("--seed", bench_args.seed, "root seed (default 1)");
  cmd_bench->add_option("--methods", bench_args.methods, "subset of derand,random");
  cmd_bench->add_option("--epsilon", bench_args.epsilon,
                        "estimation accuracy; also the cost accuracy with --fixed-budget");
  cmd_bench->add_option("--delta", bench_args.delta, "failure probability (default 0.05)");
  cmd_bench->add_option("--eta", bench_args.eta, "budget-free exponent rate (default 0.9)");
  cmd_bench->add_flag("--unweighted", bench_args.unweighted, "ignore coefficients in the cost");
  cmd_bench->add_flag("--fixed-budget", bench_args.fixed_budget,
                      "use the fixed-budget cost instead of the budget-free one");
  cmd_bench->add_option("--qubit-cap", bench_args.qubit_cap,
                        "refuse Hamiltonians above this size (default 16, max 20)");
  cmd_bench->add_option("--out", bench_args.out_path, "table output file");

  try {
    app.parse(argc, argv);
    if (*cmd_derand) return run_derandomize(derand_args);
    if (*cmd_simulate) return run_simulate(simulate_args);
    if (*cmd_estimate) return run_estimate(estimate_args);
    if (*cmd_confidence) return run_confidence(confidence_args);
    if (*cmd_bench) return run_bench(bench_args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const derand::parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const derand::capacity_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
