#include "derand/pauli.hpp"

#include <bit>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace derand {

namespace {

constexpr std::uint64_t kLowBits = 0x5555555555555555ull;
constexpr std::size_t kLabelsPerWord = 32;

std::size_t word_count(std::size_t n) { return (n + kLabelsPerWord - 1) / kLabelsPerWord; }

std::vector<std::uint64_t> pack(const std::vector<Pauli>& labels) {
  std::vector<std::uint64_t> words(word_count(labels.size()), 0);
  for (std::size_t k = 0; k < labels.size(); ++k) {
    words[k / kLabelsPerWord] |=
        static_cast<std::uint64_t>(labels[k]) << (2 * (k % kLabelsPerWord));
  }
  return words;
}

Pauli label_at(std::span<const std::uint64_t> words, std::size_t k) {
  return static_cast<Pauli>((words[k / kLabelsPerWord] >> (2 * (k % kLabelsPerWord))) & 3u);
}

// Low bit of each 2-bit group set iff the group is non-identity.
std::uint64_t nonid_mask(std::uint64_t word) { return (word | (word >> 1)) & kLowBits; }

int popcount_weight(std::span<const std::uint64_t> words) {
  int w = 0;
  for (std::uint64_t word : words) w += std::popcount(nonid_mask(word));
  return w;
}

// Conflict-free on every position: either o is I or o equals p there.
bool words_hit(std::span<const std::uint64_t> o, std::span<const std::uint64_t> p,
               std::size_t limit_labels) {
  const std::size_t full = limit_labels / kLabelsPerWord;
  for (std::size_t i = 0; i < full; ++i) {
    const std::uint64_t d = o[i] ^ p[i];
    if (nonid_mask(d) & nonid_mask(o[i])) return false;
  }
  const std::size_t rem = limit_labels % kLabelsPerWord;
  if (rem != 0) {
    const std::uint64_t mask = (std::uint64_t{1} << (2 * rem)) - 1;
    const std::uint64_t ow = o[full] & mask;
    const std::uint64_t d = (o[full] ^ p[full]) & mask;
    if (nonid_mask(d) & nonid_mask(ow)) return false;
  }
  return true;
}

std::vector<Pauli> parse_labels(std::string_view text, std::size_t column_offset, bool allow_identity) {
  if (text.empty()) throw parse_error("empty Pauli string", 0, column_offset);
  std::vector<Pauli> labels;
  labels.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto p = pauli_from_char(text[i]);
    if (!p || (!allow_identity && *p == Pauli::I)) {
      const std::string what = !p
          ? std::string("illegal Pauli label '") + text[i] + "' (expected I, X, Y or Z)"
          : "identity label not allowed in a measurement basis";
      throw parse_error(what, 0, column_offset + i);
    }
    labels.push_back(*p);
  }
  return labels;
}

}  // namespace

char pauli_char(Pauli p) {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
  }
  return '?';
}

std::optional<Pauli> pauli_from_char(char c) {
  switch (c) {
    case 'I': return Pauli::I;
    case 'X': return Pauli::X;
    case 'Y': return Pauli::Y;
    case 'Z': return Pauli::Z;
    default: return std::nullopt;
  }
}

std::string format_double(double value) {
  char buf[40];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
    if (std::strtod(buf, nullptr) == value) break;
  }
  return buf;
}

PauliObservable::PauliObservable(const std::vector<Pauli>& labels, double coefficient)
    : size_(labels.size()), coefficient_(coefficient), words_(pack(labels)) {
  if (labels.empty()) throw std::invalid_argument("Pauli observable needs at least one label");
  weight_ = popcount_weight(words_);
}

PauliObservable PauliObservable::parse(std::string_view text) {
  // Trim outer whitespace but remember where the content starts so error
  // columns refer to the original string.
  std::size_t begin = text.find_first_not_of(" \t");
  if (begin == std::string_view::npos) throw parse_error("empty Pauli term", 0, 1);
  std::size_t end = text.find_last_not_of(" \t") + 1;
  std::string_view body = text.substr(begin, end - begin);

  double coefficient = 1.0;
  std::size_t labels_offset = begin;
  std::string_view labels_text = body;

  const std::size_t ws = body.find_first_of(" \t");
  if (ws != std::string_view::npos) {
    std::string_view coeff_text = body.substr(0, ws);
    std::string_view digits = coeff_text;
    if (!digits.empty() && digits.front() == '+') digits.remove_prefix(1);  // from_chars has no '+'
    const char* first = digits.data();
    const char* last = first + digits.size();
    auto [ptr, ec] = std::from_chars(first, last, coefficient);
    if (digits.empty() || ec != std::errc() || ptr != last) {
      const std::size_t bad = begin + static_cast<std::size_t>(ptr - coeff_text.data());
      throw parse_error("malformed coefficient '" + std::string(coeff_text) + "'", 0, bad + 1);
    }
    const std::size_t rest = body.find_first_not_of(" \t", ws);
    labels_text = body.substr(rest);
    labels_offset = begin + rest;
    if (labels_text.find_first_of(" \t") != std::string_view::npos)
      throw parse_error("expected '[coefficient] pauli_string', got extra token", 0,
                        labels_offset + labels_text.find_first_of(" \t") + 1);
  }

  PauliObservable o;
  const auto labels = parse_labels(labels_text, labels_offset + 1, /*allow_identity=*/true);
  o.size_ = labels.size();
  o.coefficient_ = coefficient;
  o.words_ = pack(labels);
  o.weight_ = popcount_weight(o.words_);
  return o;
}

Pauli PauliObservable::label(std::size_t k) const {
  if (k >= size_) throw std::out_of_range("Pauli label index out of range");
  return label_at(words_, k);
}

int PauliObservable::suffix_weight(std::size_t k) const {
  if (k > size_) throw std::out_of_range("suffix_weight position out of range");
  if (k == 0) return weight_;
  int w = 0;
  const std::size_t first = k / kLabelsPerWord;
  for (std::size_t i = first; i < words_.size(); ++i) {
    std::uint64_t word = words_[i];
    if (i == first) word &= ~((std::uint64_t{1} << (2 * (k % kLabelsPerWord))) - 1);
    w += std::popcount(nonid_mask(word));
  }
  return w;
}

std::string PauliObservable::labels_str() const {
  std::string s(size_, '?');
  for (std::size_t k = 0; k < size_; ++k) s[k] = pauli_char(label_at(words_, k));
  return s;
}

std::string PauliObservable::str() const { return format_double(coefficient_) + " " + labels_str(); }

MeasurementBasis::MeasurementBasis(const std::vector<Pauli>& labels) {
  if (labels.empty()) throw std::invalid_argument("measurement basis needs at least one label");
  for (Pauli p : labels)
    if (p == Pauli::I)
      throw std::invalid_argument("measurement basis must be full weight (no identity labels)");
  size_ = labels.size();
  words_ = pack(labels);
}

MeasurementBasis MeasurementBasis::parse(std::string_view text) {
  MeasurementBasis b(parse_labels(text, 1, /*allow_identity=*/false));
  return b;
}

Pauli MeasurementBasis::label(std::size_t k) const {
  if (k >= size_) throw std::out_of_range("basis label index out of range");
  return label_at(words_, k);
}

std::string MeasurementBasis::str() const {
  std::string s(size_, '?');
  for (std::size_t k = 0; k < size_; ++k) s[k] = pauli_char(label_at(words_, k));
  return s;
}

bool hits(const PauliObservable& o, const MeasurementBasis& p) {
  if (o.size() != p.size())
    throw dimension_error("hit test requires equal lengths (" + std::to_string(o.size()) +
                          " vs " + std::to_string(p.size()) + ")");
  return words_hit(o.words(), p.words(), o.size());
}

bool hits_prefix(const PauliObservable& o, const MeasurementBasis& p, std::size_t count) {
  if (o.size() != p.size())
    throw dimension_error("hit test requires equal lengths");
  if (count > o.size()) throw std::out_of_range("prefix length out of range");
  return words_hit(o.words(), p.words(), count);
}

ObservableSet::ObservableSet(std::vector<PauliObservable> observables)
    : observables_(std::move(observables)) {
  if (observables_.empty())
    throw std::invalid_argument("observable set needs at least one observable");
  qubits_ = observables_.front().size();
  for (const auto& o : observables_)
    if (o.size() != qubits_)
      throw dimension_error("observable set requires a uniform qubit count");
}

}  // namespace derand
