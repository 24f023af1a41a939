#pragma once

#include <array>
#include <complex>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qsearch/bigint.hpp"
#include "qsearch/errors.hpp"

namespace qsearch::circuit {

using Complex = std::complex<double>;
using Matrix2 = std::array<Complex, 4>;  // row-major: m00 m01 m10 m11

Matrix2 hadamard_matrix();
Matrix2 x_matrix();
Matrix2 z_matrix();
Matrix2 minus_z_matrix();
/// XH and HX as single one-qubit gates (the signed-query sandwich).
Matrix2 xh_matrix();
Matrix2 hx_matrix();
/// R_ratio: |0> -> sqrt(ratio)|0> + sqrt(1-ratio)|1>, as a real rotation.
Matrix2 lowering_rotation(double ratio);
Matrix2 adjoint(const Matrix2& m);
bool is_unitary(const Matrix2& m, double tol = 1e-10);

enum class QueryStyle { standard, signed_phase };

struct OneQubitGate {
  Matrix2 m;
  int wire;
  std::string name;  // "h" for Hadamard, "u" otherwise (export tag)
};
struct ToffoliGate {
  int control1, control2, target;
};
struct QueryGate {
  std::vector<int> address;  // MSB first
  int target;
  QueryStyle style;
};
struct ZeroReflectionGate {
  std::vector<int> wires;
};

using Gate = std::variant<OneQubitGate, ToffoliGate, QueryGate, ZeroReflectionGate>;

struct CountReport {
  BigInt queries{0};
  BigInt elementary_gates{0};
  bool operator==(const CountReport&) const = default;
  CountReport& operator+=(const CountReport& o) {
    queries += o.queries;
    elementary_gates += o.elementary_gates;
    return *this;
  }
};

/// Cost conventions: a one-qubit gate or Toffoli is 1 elementary gate; a
/// standard query is 1 query; a signed query is 1 query + 2 gates (the XH
/// pair counted as one gate each); a zero reflection on m wires costs
/// 4m-1 gates (m >= 2; the ladder decomposition) or 1 gate (m = 1, plain Z).
CountReport gate_cost(const Gate& g);

/// How many address wires each query touches; informational audit only.
struct QueryAudit {
  BigInt query_count{0};
  BigInt total_address_wires{0};
  int max_address_wires = 0;
};

class Circuit {
 public:
  Circuit() = default;
  Circuit(int num_wires, std::vector<Gate> gates, std::vector<int> ancilla_wires = {});

  int num_wires() const { return num_wires_; }
  const std::vector<Gate>& gates() const { return gates_; }
  const std::vector<int>& ancilla_wires() const { return ancilla_wires_; }

  CountReport counts() const;
  QueryAudit query_audit() const;

  /// Gates reversed, one-qubit matrices conjugate-transposed; queries,
  /// Toffolis and reflections are self-inverse.
  Circuit inverted() const;

  /// this followed by later; wire counts must match.
  Circuit composed_with(const Circuit& later) const;

  /// Wires renumbered by wire_map (old index -> new index).
  Circuit remapped(const std::vector<int>& wire_map, int new_num_wires) const;

  /// Every query's address list gains the given most-significant prefix;
  /// used when an algorithm is embedded into a larger database.
  Circuit with_query_prefix(const std::vector<int>& prefix) const;

 private:
  int num_wires_ = 0;
  std::vector<Gate> gates_;
  std::vector<int> ancilla_wires_;
};

/// Incremental builder; build() freezes the gate list into a Circuit.
class CircuitBuilder {
 public:
  explicit CircuitBuilder(int num_wires);

  CircuitBuilder& one_qubit(const Matrix2& m, int wire, const std::string& name = "u");
  CircuitBuilder& hadamard(int wire);
  CircuitBuilder& toffoli(int control1, int control2, int target);
  CircuitBuilder& query(std::vector<int> address, int target,
                        QueryStyle style = QueryStyle::standard);
  CircuitBuilder& zero_reflection(std::vector<int> wires);
  CircuitBuilder& append(const Circuit& sub);
  CircuitBuilder& append_inverted(const Circuit& sub);
  CircuitBuilder& mark_ancilla(int wire);

  int num_wires() const { return num_wires_; }
  Circuit build();

 private:
  int num_wires_;
  std::vector<Gate> gates_;
  std::vector<int> ancilla_wires_;

  void check_wire(int wire) const;
};

/// Explicit Toffoli-ladder realization of the reflection through |0^m> on
/// m + (m-1) wires: X on each input, an AND ladder into the ancillas, -Z on
/// the last ancilla, then everything uncomputed. 4m-1 gates, m >= 2.
Circuit expand_zero_reflection(int m);

/// Metadata trailer for exported search algorithms.
struct AlgorithmMetadata {
  std::string a_known_decimal;
  std::vector<int> address_wires;
  std::vector<int> flag_wires;
};

/// Line-oriented JSON: a header record, one record per gate, and an
/// optional metadata trailer. Byte-stable for a given circuit.
std::string to_jsonl(const Circuit& c, const AlgorithmMetadata* meta = nullptr);
void write_jsonl(const Circuit& c, std::ostream& out, const AlgorithmMetadata* meta = nullptr);

struct ParsedCircuit {
  Circuit circuit;
  std::optional<AlgorithmMetadata> meta;
};
ParsedCircuit read_jsonl(std::istream& in);

}  // namespace qsearch::circuit
