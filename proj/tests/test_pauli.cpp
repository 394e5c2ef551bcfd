#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <vector>

#include "derand/pauli.hpp"
#include "derand/rng.hpp"

using namespace derand;

namespace {

PauliObservable obs(const std::string& labels, double coefficient = 1.0) {
  std::vector<Pauli> v;
  for (char c : labels) v.push_back(*pauli_from_char(c));
  return PauliObservable(v, coefficient);
}

MeasurementBasis basis(const std::string& labels) { return MeasurementBasis::parse(labels); }

PauliObservable random_observable(RngStream& rng, std::size_t qubits) {
  std::vector<Pauli> labels(qubits);
  for (auto& l : labels) l = static_cast<Pauli>(rng.bounded(4));
  const double coefficient = rng.uniform01() * 4.0 - 2.0;
  return PauliObservable(labels, coefficient);
}

MeasurementBasis random_basis(RngStream& rng, std::size_t qubits) {
  std::vector<Pauli> labels(qubits);
  for (auto& l : labels) l = static_cast<Pauli>(1 + rng.bounded(3));
  return MeasurementBasis(labels);
}

}  // namespace

TEST_CASE("hit relation on the stock two-qubit examples") {
  const auto xx = basis("XX");
  CHECK(hits(obs("XI"), xx));
  CHECK(hits(obs("IX"), xx));
  CHECK(hits(obs("XX"), xx));
  CHECK_FALSE(hits(obs("ZI"), xx));
  CHECK_FALSE(hits(obs("IZ"), xx));
  CHECK_FALSE(hits(obs("ZZ"), xx));
}

TEST_CASE("identity observable is hit by everything") {
  RngStream rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_basis(rng, 3);
    CHECK(hits(obs("III"), p));
  }
}

TEST_CASE("hit test length mismatch raises a dimension error") {
  CHECK_THROWS_AS((void)hits(obs("XI"), basis("XXX")), dimension_error);
}

TEST_CASE("weights") {
  CHECK(obs("XYZ").weight() == 3);
  CHECK(obs("II").weight() == 0);
  CHECK(obs("ZIZI").weight() == 2);
}

TEST_CASE("suffix weights") {
  const auto o = obs("XIY");
  CHECK(o.suffix_weight(1) == 1);
  CHECK(o.suffix_weight(0) == 2);
  CHECK(o.suffix_weight(3) == 0);
  CHECK_THROWS_AS(o.suffix_weight(4), std::out_of_range);
}

TEST_CASE("suffix weight telescopes one label at a time") {
  RngStream rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t qubits = 1 + rng.bounded(40);  // multiple packed words too
    const auto o = random_observable(rng, qubits);
    for (std::size_t k = 0; k < qubits; ++k) {
      const int expected = o.label(k) != Pauli::I ? 1 : 0;
      CHECK(o.suffix_weight(k) - o.suffix_weight(k + 1) == expected);
    }
    CHECK(o.suffix_weight(0) == o.weight());
  }
}

TEST_CASE("parsing terms") {
  const auto o = PauliObservable::parse("-0.5 XXIZ");
  CHECK(o.coefficient() == -0.5);
  CHECK(o.labels_str() == "XXIZ");

  const auto plain = PauliObservable::parse("YY");
  CHECK(plain.coefficient() == 1.0);
  CHECK(plain.labels_str() == "YY");
}

TEST_CASE("parse errors carry the offending column") {
  try {
    PauliObservable::parse("0.25 AB");
    FAIL("expected a parse error");
  } catch (const parse_error& e) {
    CHECK(e.column() == 6);  // the 'A'
  }
  CHECK_THROWS_AS(PauliObservable::parse(""), parse_error);
  CHECK_THROWS_AS(PauliObservable::parse("  "), parse_error);
  CHECK_THROWS_AS(PauliObservable::parse("1.0"), parse_error);     // digits are not labels
  CHECK_THROWS_AS(PauliObservable::parse("1.0 XX Z"), parse_error);
  CHECK_THROWS_AS(PauliObservable::parse("1.x XX"), parse_error);
}

TEST_CASE("render/parse round trip") {
  RngStream rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto o = random_observable(rng, 1 + rng.bounded(50));
    const auto back = PauliObservable::parse(o.str());
    CHECK(back == o);
  }
}

TEST_CASE("format_double round trips exactly") {
  RngStream rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const double v = (rng.uniform01() - 0.5) * std::pow(10.0, double(rng.bounded(20)) - 10.0);
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
}

TEST_CASE("measurement basis rejects identity labels") {
  CHECK_THROWS_AS(MeasurementBasis::parse("XIZ"), parse_error);
  CHECK_THROWS_AS(MeasurementBasis(std::vector<Pauli>{Pauli::I}), std::invalid_argument);
  CHECK_THROWS_AS(MeasurementBasis::parse(""), parse_error);
}

TEST_CASE("hits is monotone under erasing labels to identity") {
  RngStream rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t qubits = 1 + rng.bounded(12);
    const auto o = random_observable(rng, qubits);
    const auto p = random_basis(rng, qubits);
    if (!hits(o, p)) continue;
    std::vector<Pauli> erased;
    for (std::size_t k = 0; k < qubits; ++k) erased.push_back(o.label(k));
    const std::size_t victim = rng.bounded(static_cast<std::uint32_t>(qubits));
    erased[victim] = Pauli::I;
    CHECK(hits(PauliObservable(erased), p));
  }
}

TEST_CASE("hits agrees with a positionwise scan") {
  RngStream rng(29);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t qubits = 1 + rng.bounded(40);
    const auto o = random_observable(rng, qubits);
    const auto p = random_basis(rng, qubits);
    bool expected = true;
    for (std::size_t k = 0; k < qubits && expected; ++k)
      expected = label_hits(o.label(k), p.label(k));
    CHECK(hits(o, p) == expected);
  }
}

TEST_CASE("prefix hit tests") {
  const auto o = obs("XIZ");
  const auto p = basis("XYZ");
  CHECK(hits_prefix(o, p, 0));
  CHECK(hits_prefix(o, p, 1));
  CHECK(hits_prefix(o, p, 2));  // position 1 is I
  CHECK(hits_prefix(o, p, 3));
  const auto q = basis("YYZ");
  CHECK(hits_prefix(o, q, 0));
  CHECK_FALSE(hits_prefix(o, q, 1));
  CHECK_THROWS_AS(hits_prefix(o, q, 4), std::out_of_range);
}

TEST_CASE("observable sets enforce their invariants") {
  CHECK_THROWS_AS(ObservableSet(std::vector<PauliObservable>{}), std::invalid_argument);
  CHECK_THROWS_AS(ObservableSet({obs("XX"), obs("X")}), dimension_error);
  const ObservableSet set({obs("XX"), obs("ZZ")});
  CHECK(set.size() == 2);
  CHECK(set.qubits() == 2);
}

TEST_CASE("empty observables are rejected") {
  CHECK_THROWS_AS(PauliObservable(std::vector<Pauli>{}), std::invalid_argument);
}
