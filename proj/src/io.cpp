#include "derand/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace derand::io {

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return out;
}

// Strips the comment tail and reports whether anything is left.
bool content_of(const std::string& line, std::string& content) {
  const std::size_t hash = line.find('#');
  content = line.substr(0, hash);
  return content.find_first_not_of(" \t\r") != std::string::npos;
}

void strip_cr(std::string& content) {
  while (!content.empty() && (content.back() == '\r' || content.back() == ' ' ||
                              content.back() == '\t'))
    content.pop_back();
}

// Runs `parse` per content line, decorating errors with file and line.
template <class Fn>
void for_each_content_line(std::istream& in, const std::string& source, Fn&& parse) {
  std::string line, content;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!content_of(line, content)) continue;
    strip_cr(content);
    try {
      parse(content, number);
    } catch (const parse_error& e) {
      throw parse_error(source + ": " + e.what(), number, e.column());
    }
  }
}

double parse_double_token(const std::string& token, const std::string& what) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = first + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw parse_error("malformed " + what + " '" + token + "'");
  return value;
}

}  // namespace

ObservableSet read_observables(std::istream& in, const std::string& source) {
  std::vector<PauliObservable> observables;
  for_each_content_line(in, source, [&](const std::string& content, std::size_t) {
    observables.push_back(PauliObservable::parse(content));
  });
  if (observables.empty())
    throw parse_error(source + ": no observables found");
  try {
    return ObservableSet(std::move(observables));
  } catch (const std::exception& e) {
    throw parse_error(source + ": " + e.what());
  }
}

ObservableSet read_observables_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_observables(in, path.string());
}

void write_observables_file(const std::filesystem::path& path, const ObservableSet& set) {
  auto out = open_output(path);
  for (const auto& o : set) out << o.str() << '\n';
}

std::vector<MeasurementBasis> read_schedule(std::istream& in, const std::string& source) {
  std::vector<MeasurementBasis> rows;
  for_each_content_line(in, source, [&](const std::string& content, std::size_t) {
    std::string token = content;
    const std::size_t begin = token.find_first_not_of(" \t");
    token = token.substr(begin);
    rows.push_back(MeasurementBasis::parse(token));
  });
  return rows;
}

std::vector<MeasurementBasis> read_schedule_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_schedule(in, path.string());
}

void write_schedule_file(const std::filesystem::path& path,
                         std::span<const MeasurementBasis> rows) {
  auto out = open_output(path);
  for (const auto& row : rows) out << row.str() << '\n';
}

std::vector<OutcomeRecord> read_outcomes(std::istream& in, const std::string& source) {
  std::vector<OutcomeRecord> outcomes;
  for_each_content_line(in, source, [&](const std::string& content, std::size_t) {
    std::istringstream tokens(content);
    std::string basis_text, signs_text, extra;
    if (!(tokens >> basis_text >> signs_text))
      throw parse_error("expected 'basis_string sign_string'");
    if (tokens >> extra) throw parse_error("unexpected trailing token '" + extra + "'");
    const MeasurementBasis basis = MeasurementBasis::parse(basis_text);
    if (signs_text.size() != basis.size())
      throw parse_error("sign string length " + std::to_string(signs_text.size()) +
                        " does not match basis length " + std::to_string(basis.size()));
    std::vector<int> signs(signs_text.size());
    for (std::size_t k = 0; k < signs_text.size(); ++k) {
      if (signs_text[k] == '+') signs[k] = 1;
      else if (signs_text[k] == '-') signs[k] = -1;
      else throw parse_error(std::string("illegal sign character '") + signs_text[k] + "'");
    }
    outcomes.emplace_back(basis, std::move(signs));
  });
  return outcomes;
}

std::vector<OutcomeRecord> read_outcomes_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_outcomes(in, path.string());
}

void write_outcomes_file(const std::filesystem::path& path,
                         std::span<const OutcomeRecord> outcomes) {
  auto out = open_output(path);
  for (const auto& record : outcomes) {
    out << record.basis.str() << ' ';
    for (int s : record.signs) out << (s > 0 ? '+' : '-');
    out << '\n';
  }
}

StateVector read_state(std::istream& in, const std::string& source) {
  std::size_t qubits = 0;
  std::vector<std::complex<double>> amps;
  bool have_header = false;
  std::size_t next_amp = 0;
  for_each_content_line(in, source, [&](const std::string& content, std::size_t) {
    std::istringstream tokens(content);
    if (!have_header) {
      long long n = -1;
      if (!(tokens >> n) || n < 1)
        throw parse_error("expected the qubit count on the first content line");
      if (static_cast<std::size_t>(n) > StateVector::kMaxQubits)
        throw capacity_error("state of " + std::to_string(n) + " qubits exceeds the cap of " +
                             std::to_string(StateVector::kMaxQubits));
      qubits = static_cast<std::size_t>(n);
      amps.resize(std::size_t{1} << qubits);
      have_header = true;
      return;
    }
    if (next_amp >= amps.size()) throw parse_error("more amplitudes than 2^n");
    std::string re, im;
    if (!(tokens >> re >> im)) throw parse_error("expected 'real imag'");
    amps[next_amp++] = {parse_double_token(re, "real part"),
                        parse_double_token(im, "imaginary part")};
  });
  if (!have_header) throw parse_error(source + ": empty state file");
  if (next_amp != amps.size())
    throw parse_error(source + ": expected " + std::to_string(amps.size()) +
                      " amplitudes, found " + std::to_string(next_amp));
  try {
    return StateVector::from_amplitudes(std::move(amps));
  } catch (const std::invalid_argument& e) {
    throw parse_error(source + ": " + e.what());
  }
}

StateVector read_state_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_state(in, path.string());
}

void write_state_file(const std::filesystem::path& path, const StateVector& state) {
  auto out = open_output(path);
  out << state.qubits() << '\n';
  for (const auto& a : state.amplitudes())
    out << format_double(a.real()) << ' ' << format_double(a.imag()) << '\n';
}

void Manifest::set(std::string key, std::string value) {
  entries_.emplace_back(std::move(key), std::move(value));
}

void Manifest::set(std::string key, double value) {
  entries_.emplace_back(std::move(key), format_double(value));
}

void Manifest::set(std::string key, std::uint64_t value) {
  entries_.emplace_back(std::move(key), std::to_string(value));
}

std::string Manifest::str() const {
  std::string out;
  for (const auto& [key, value] : entries_) {
    out += key;
    out += ' ';
    out += value;
    out += '\n';
  }
  return out;
}

void write_manifest_file(const std::filesystem::path& output_path, const Manifest& manifest) {
  auto out = open_output(output_path.string() + ".manifest");
  out << manifest.str();
}

}  // namespace derand::io
