#include <sstream>

#include "doctest.h"
#include "qsearch/circuit.hpp"
#include "qsearch/oracle.hpp"
#include "qsearch/simulator.hpp"

using namespace qsearch;
using namespace qsearch::circuit;

TEST_SUITE("circuit") {

TEST_CASE("appending gates and counting") {
  CircuitBuilder b(1);
  b.hadamard(0);
  Circuit c = b.build();
  CHECK(c.counts().queries == 0);
  CHECK(c.counts().elementary_gates == 1);

  CircuitBuilder five(2);
  for (int i = 0; i < 5; ++i) five.hadamard(i % 2);
  CHECK(five.build().counts().elementary_gates == 5);
}

TEST_CASE("unitarity is validated at insertion") {
  CircuitBuilder b(1);
  Matrix2 doubled{Complex(2), Complex(0), Complex(0), Complex(2)};
  CHECK_THROWS_AS(b.one_qubit(doubled, 0), DomainError);
  CHECK_THROWS_AS(b.hadamard(3), DomainError);  // out of range
  // The identity rotation is still a legal, counted gate.
  b.one_qubit(lowering_rotation(1.0), 0, "u");
  CHECK(b.build().counts().elementary_gates == 1);
}

TEST_CASE("zero reflection counts 4m-1") {
  CircuitBuilder b(22);
  std::vector<int> w3{0, 1, 2};
  b.zero_reflection(w3);
  CHECK(b.build().counts().elementary_gates == 11);

  CircuitBuilder b1(1);
  b1.zero_reflection({0});
  CHECK(b1.build().counts().elementary_gates == 1);  // D_1 = Z

  CircuitBuilder b22(22);
  std::vector<int> all .;
  do {} while (false);
}

TEST_CASE("zero reflection on 22 wires plus a query") {
  CircuitBuilder b(23);
  std::vector<int> wires(22);
  for (int i = 0; i < 22; ++i) wires[i] = i;
  b.zero_reflection(wires);
  CHECK(b.build().counts().elementary_gates == 87);

  b.query({0, 1, 2}, 22, QueryStyle::standard);
  auto counts = b.build().counts();
  CHECK(counts.queries == 1);
  CHECK(counts.elementary_gates == 87);
}

TEST_CASE("signed query counts one query and two gates") {
  CircuitBuilder b(3);
  b.query({0, 1}, 2, QueryStyle::signed_phase);
  auto counts = b.build().counts();
  CHECK(counts.queries == 1);
  CHECK(counts.elementary_gates == 2);
}

TEST_CASE("expanded ladder structure") {
  Circuit two = expand_zero_reflection(2);
  CHECK(two.num_wires() == 3);
  CHECK(two.ancilla_wires() == std::vector<int>{2});
  CHECK(two.gates().size() == 7);  // 2 X + Toffoli + (-Z) + Toffoli + 2 X
  CHECK(two.counts().elementary_gates == 7);

  Circuit eight = expand_zero_reflection(8);
  CHECK(eight.counts().elementary_gates == 31);
  CHECK(eight.num_wires() == 15);
  CHECK_THROWS_AS(expand_zero_reflection(1), DomainError);
}

TEST_CASE("inversion") {
  CircuitBuilder b(2);
  b.hadamard(0);
  Circuit h = b.build();
  Circuit hinv = h.inverted();
  REQUIRE(hinv.gates().size() == 1);
  const auto& g = std::get<OneQubitGate>(hinv.gates()[0]);
  CHECK(g.name == "h");
  CHECK(g.m == hadamard_matrix());  // H is self-inverse

  CircuitBuilder b3(2);
  b3.hadamard(0).one_qubit(x_matrix(), 1, "u").hadamard(1);
  Circuit c3 = b3.build();
  Circuit inv3 = c3.inverted();
  REQUIRE(inv3.gates().size() == 3);
  CHECK(std::get<OneQubitGate>(inv3.gates()[0]).wire == 1);
  CHECK(inv3.counts() == c3.counts());

  Circuit round = inv3.inverted();
  for (size_t i = 0; i < 3; ++i) {
    const auto& a = std::get<OneQubitGate>(round.gates()[i]);
    const auto& e = std::get<OneQubitGate>(c3.gates()[i]);
    CHECK(a.wire == e.wire);
    for (int j = 0; j < 4; ++j) CHECK(std::abs(a.m[j] - e.m[j]) < 1e-12);
  }
}

TEST_CASE("count additivity under composition") {
  CircuitBuilder b1(3);
  b1.hadamard(0).query({0, 1}, 2, QueryStyle::signed_phase).zero_reflection({0, 1, 2});
  Circuit c1 = b1.build();
  CircuitBuilder b2(3);
  b2.toffoli(0, 1, 2).hadamard(2);
  Circuit c2 = b2.build();
  auto combined = c1.composed_with(c2).counts();
  CountReport sum = c1.counts();
  sum += c2.counts();
  CHECK(combined == sum);
}

TEST_CASE("json export and import round-trip") {
  CircuitBuilder b(4);
  b.hadamard(0)
      .one_qubit(lowering_rotation(0.5), 3, "u")
      .query({0, 1}, 2, QueryStyle::standard)
      .query({0, 1}, 3, QueryStyle::signed_phase)
      .toffoli(0, 1, 2)
      .zero_reflection({0, 1, 2, 3});
  Circuit c = b.build();
  AlgorithmMetadata meta;
  meta.a_known_decimal = "0.25";
  meta.address_wires = {0, 1};
  meta.flag_wires = {3};

  std::string text = to_jsonl(c, &meta);
  CHECK(text == to_jsonl(c, &meta));  // byte-stable

  std::istringstream in(text);
  auto parsed = read_jsonl(in);
  CHECK(parsed.circuit.num_wires() == 4);
  CHECK(parsed.circuit.counts() == c.counts());
  REQUIRE(parsed.meta.has_value());
  CHECK(parsed.meta->address_wires == meta.address_wires);
  CHECK(parsed.meta->flag_wires == meta.flag_wires);

  // Same behavior after the round trip.
  oracle::Database db = oracle::Database::unique_solution(2, 3);
  auto before = simulator::run(c, db, {});
  auto after = simulator::run(parsed.circuit, db, {});
  for (size_t i = 0; i < before.amp.size(); ++i)
    CHECK(std::abs(before.amp[i] - after.amp[i]) < 1e-12);
}

TEST_CASE("jsonl rejects malformed input") {
  std::istringstream empty("");
  CHECK_THROWS_AS(read_jsonl(empty), IoError);
  std::istringstream junk("not json\n");
  CHECK_THROWS_AS(read_jsonl(junk), IoError);
  std::istringstream bad_op("{\"wires\":2}\n{\"op\":\"frobnicate\",\"wires\":[0]}\n");
  CHECK_THROWS_AS(read_jsonl(bad_op), IoError);
}

TEST_CASE("remapping and query prefixes") {
  CircuitBuilder b(3);
  b.hadamard(0).query({0, 1}, 2, QueryStyle::standard);
  Circuit c = b.build();
  Circuit moved = c.remapped({4, 5, 6}, 7);
  const auto& q = std::get<QueryGate>(moved.gates()[1]);
  CHECK(q.address == std::vector<int>{4, 5});
  CHECK(q.target == 6);

  Circuit prefixed = moved.with_query_prefix({0, 1});
  const auto& q2 = std::get<QueryGate>(prefixed.gates()[1]);
  CHECK(q2.address == std::vector<int>{0, 1, 4, 5});
  CHECK(prefixed.counts().queries == 1);
}

}  // TEST_SUITE
