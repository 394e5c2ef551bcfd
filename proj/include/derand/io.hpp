#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "derand/estimator.hpp"
#include "derand/pauli.hpp"
#include "derand/simulator.hpp"

// Line-oriented text formats. Everywhere: '#' starts a comment, blank lines
// are ignored, parse failures carry 1-based line (and column) positions.
//
//   observables / Hamiltonians:  "[coefficient] pauli_string" per line
//   schedules:                   one basis string per line, measurement order
//   outcomes:                    "basis_string sign_string", signs over {+,-}
//   states:                      header line "n", then 2^n lines "real imag"
namespace derand::io {

ObservableSet read_observables(std::istream& in, const std::string& source);
ObservableSet read_observables_file(const std::filesystem::path& path);
void write_observables_file(const std::filesystem::path& path, const ObservableSet& set);

std::vector<MeasurementBasis> read_schedule(std::istream& in, const std::string& source);
std::vector<MeasurementBasis> read_schedule_file(const std::filesystem::path& path);
void write_schedule_file(const std::filesystem::path& path,
                         std::span<const MeasurementBasis> rows);

std::vector<OutcomeRecord> read_outcomes(std::istream& in, const std::string& source);
std::vector<OutcomeRecord> read_outcomes_file(const std::filesystem::path& path);
void write_outcomes_file(const std::filesystem::path& path,
                         std::span<const OutcomeRecord> outcomes);

StateVector read_state(std::istream& in, const std::string& source);
StateVector read_state_file(const std::filesystem::path& path);
void write_state_file(const std::filesystem::path& path, const StateVector& state);

// Ordered key/value run record, written beside outputs as "<out>.manifest".
class Manifest {
 public:
  void set(std::string key, std::string value);
  void set(std::string key, double value);
  void set(std::string key, std::uint64_t value);
  std::string str() const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

void write_manifest_file(const std::filesystem::path& output_path, const Manifest& manifest);

}  // namespace derand::io
