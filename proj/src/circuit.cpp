#include "qsearch/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace qsearch::circuit {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}

Matrix2 hadamard_matrix() {
  return {Complex(kInvSqrt2), Complex(kInvSqrt2), Complex(kInvSqrt2), Complex(-kInvSqrt2)};
}

Matrix2 x_matrix() { return {Complex(0), Complex(1), Complex(1), Complex(0)}; }

Matrix2 z_matrix() { return {Complex(1), Complex(0), Complex(0), Complex(-1)}; }

Matrix2 minus_z_matrix() { return {Complex(-1), Complex(0), Complex(0), Complex(1)}; }

Matrix2 xh_matrix() {
  // X * H: applied after H in circuit order.
  return {Complex(kInvSqrt2), Complex(-kInvSqrt2), Complex(kInvSqrt2), Complex(kInvSqrt2)};
}

Matrix2 hx_matrix() {
  // H * X: applies X first.
  return {Complex(kInvSqrt2), Complex(kInvSqrt2), Complex(-kInvSqrt2), Complex(kInvSqrt2)};
}

Matrix2 lowering_rotation(double ratio) {
  if (ratio < 0.0 || ratio > 1.0 + 1e-12)
    throw DomainError("lowering_rotation: ratio must lie in [0, 1]");
  ratio = std::min(ratio, 1.0);
  double c = std::sqrt(ratio);
  double s = std::sqrt(1.0 - ratio);
  return {Complex(c), Complex(-s), Complex(s), Complex(c)};
}

Matrix2 adjoint(const Matrix2& m) {
  return {std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])};
}

bool is_unitary(const Matrix2& m, double tol) {
  // U^dagger U == I entrywise.
  Complex a = std::conj(m[0]) * m[0] + std::conj(m[2]) * m[2];
  Complex b = std::conj(m[0]) * m[1] + std::conj(m[2]) * m[3];
  Complex c = std::conj(m[1]) * m[0] + std::conj(m[3]) * m[2];
  Complex d = std::conj(m[1]) * m[1] + std::conj(m[3]) * m[3];
  return std::abs(a - 1.0) <= tol && std::abs(b) <= tol && std::abs(c) <= tol &&
         std::abs(d - 1.0) <= tol;
}

CountReport gate_cost(const Gate& g) {
  CountReport r;
  if (std::holds_alternative<OneQubitGate>(g) || std::holds_alternative<ToffoliGate>(g)) {
    r.elementary_gates = 1;
  } else if (const auto* q = std::get_if<QueryGate>(&g)) {
    r.queries = 1;
    if (q->style == QueryStyle::signed_phase) r.elementary_gates = 2;
  } else {
    const auto& zr = std::get<ZeroReflectionGate>(g);
    auto m = static_cast<long>(zr.wires.size());
    r.elementary_gates = (m == 1) ? 1 : 4 * m - 1;
  }
  return r;
}

Circuit::Circuit(int num_wires, std::vector<Gate> gates, std::vector<int> ancilla_wires)
    : num_wires_(num_wires), gates_(std::move(gates)), ancilla_wires_(std::move(ancilla_wires)) {
  if (num_wires_ <= 0) throw DomainError("Circuit: needs at least one wire");
}

CountReport Circuit::counts() const {
  CountReport total;
  for (const auto& g : gates_) total += gate_cost(g);
  return total;
}

QueryAudit Circuit::query_audit() const {
  QueryAudit audit;
  for (const auto& g : gates_) {
    if (const auto* q = std::get_if<QueryGate>(&g)) {
      audit.query_count += 1;
      audit.total_address_wires += q->address.size();
      audit.max_address_wires = std::max(audit.max_address_wires,
                                         static_cast<int>(q->address.size()));
    }
  }
  return audit;
}

Circuit Circuit::inverted() const {
  std::vector<Gate> out;
  out.reserve(gates_.size());
  for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) {
    if (const auto* u = std::get_if<OneQubitGate>(&*it)) {
      out.push_back(OneQubitGate{adjoint(u->m), u->wire, u->name == "h" ? "h" : "u"});
    } else {
      out.push_back(*it);  // Toffoli, Query, ZeroReflection are self-inverse
    }
  }
  return Circuit(num_wires_, std::move(out), ancilla_wires_);
}

Circuit Circuit::composed_with(const Circuit& later) const {
  if (later.num_wires_ != num_wires_)
    throw DomainError("composed_with: wire counts differ");
  std::vector<Gate> out = gates_;
  out.insert(out.end(), later.gates_.begin(), later.gates_.end());
  std::vector<int> anc = ancilla_wires_;
  for (int a : later.ancilla_wires_)
    if (std::find(anc.begin(), anc.end(), a) == anc.end()) anc.push_back(a);
  return Circuit(num_wires_, std::move(out), std::move(anc));
}

namespace {
int mapped(const std::vector<int>& wire_map, int w) {
  if (w < 0 || w >= static_cast<int>(wire_map.size()))
    throw DomainError("remapped: wire outside map");
  return wire_map[static_cast<size_t>(w)];
}
}  // namespace

Circuit Circuit::remapped(const std::vector<int>& wire_map, int new_num_wires) const {
  if (static_cast<int>(wire_map.size()) < num_wires_)
    throw DomainError("remapped: map smaller than wire count");
  std::vector<Gate> out;
  out.reserve(gates_.size());
  for (const auto& g : gates_) {
    if (const auto* u = std::get_if<OneQubitGate>(&g)) {
      out.push_back(OneQubitGate{u->m, mapped(wire_map, u->wire), u->name});
    } else if (const auto* t = std::get_if<ToffoliGate>(&g)) {
      out.push_back(ToffoliGate{mapped(wire_map, t->control1), mapped(wire_map, t->control2),
                                mapped(wire_map, t->target)});
    } else if (const auto* q = std::get_if<QueryGate>(&g)) {
      QueryGate nq{{}, mapped(wire_map, q->target), q->style};
      nq.address.reserve(q->address.size());
      for (int w : q->address) nq.address.push_back(mapped(wire_map, w));
      out.push_back(std::move(nq));
    } else {
      const auto& zr = std::get<ZeroReflectionGate>(g);
      ZeroReflectionGate nz;
      nz.wires.reserve(zr.wires.size());
      for (int w : zr.wires) nz.wires.push_back(mapped(wire_map, w));
      out.push_back(std::move(nz));
    }
  }
  std::vector<int> anc;
  anc.reserve(ancilla_wires_.size());
  for (int a : ancilla_wires_) anc.push_back(mapped(wire_map, a));
  return Circuit(new_num_wires, std::move(out), std::move(anc));
}

Circuit Circuit::with_query_prefix(const std::vector<int>& prefix) const {
  std::vector<Gate> out;
  out.reserve(gates_.size());
  for (const auto& g : gates_) {
    if (const auto* q = std::get_if<QueryGate>(&g)) {
      QueryGate nq{prefix, q->target, q->style};
      nq.address.insert(nq.address.end(), q->address.begin(), q->address.end());
      out.push_back(std::move(nq));
    } else {
      out.push_back(g);
    }
  }
  return Circuit(num_wires_, std::move(out), ancilla_wires_);
}

CircuitBuilder::CircuitBuilder(int num_wires) : num_wires_(num_wires) {
  if (num_wires <= 0) throw DomainError("CircuitBuilder: needs at least one wire");
}

void CircuitBuilder::check_wire(int wire) const {
  if (wire < 0 || wire >= num_wires_)
    throw DomainError("wire index " + std::to_string(wire) + " out of range [0, " +
                      std::to_string(num_wires_) + ")");
}

CircuitBuilder& CircuitBuilder::one_qubit(const Matrix2& m, int wire, const std::string& name) {
  check_wire(wire);
  if (!is_unitary(m)) throw DomainError("one_qubit: matrix is not unitary within 1e-10");
  gates_.push_back(OneQubitGate{m, wire, name});
  return *this;
}

CircuitBuilder& CircuitBuilder::hadamard(int wire) {
  return one_qubit(hadamard_matrix(), wire, "h");
}

CircuitBuilder& CircuitBuilder::toffoli(int control1, int control2, int target) {
  check_wire(control1);
  check_wire(control2);
  check_wire(target);
  if (control1 == control2 || control1 == target || control2 == target)
    throw DomainError("toffoli: wires must be distinct");
  gates_.push_back(ToffoliGate{control1, control2, target});
  return *this;
}

CircuitBuilder& CircuitBuilder::query(std::vector<int> address, int target, QueryStyle style) {
  if (address.empty()) throw DomainError("query: empty address");
  std::set<int> seen;
  for (int w : address) {
    check_wire(w);
    if (!seen.insert(w).second) throw DomainError("query: duplicate address wire");
  }
  check_wire(target);
  if (seen.count(target)) throw DomainError("query: target collides with address");
  gates_.push_back(QueryGate{std::move(address), target, style});
  return *this;
}

CircuitBuilder& CircuitBuilder::zero_reflection(std::vector<int> wires) {
  if (wires.empty()) throw DomainError("zero_reflection: needs at least one wire");
  std::set<int> seen;
  for (int w : wires) {
    check_wire(w);
    if (!seen.insert(w).second) throw DomainError("zero_reflection: duplicate wire");
  }
  gates_.push_back(ZeroReflectionGate{std::move(wires)});
  return *this;
}

CircuitBuilder& CircuitBuilder::append(const Circuit& sub) {
  if (sub.num_wires() > num_wires_)
    throw DomainError("append: subcircuit has more wires than the builder");
  for (const auto& g : sub.gates()) gates_.push_back(g);
  for (int a : sub.ancilla_wires()) mark_ancilla(a);
  return *this;
}

CircuitBuilder& CircuitBuilder::append_inverted(const Circuit& sub) {
  return append(sub.inverted());
}

CircuitBuilder& CircuitBuilder::mark_ancilla(int wire) {
  check_wire(wire);
  if (std::find(ancilla_wires_.begin(), ancilla_wires_.end(), wire) == ancilla_wires_.end())
    ancilla_wires_.push_back(wire);
  return *this;
}

Circuit CircuitBuilder::build() {
  return Circuit(num_wires_, std::move(gates_), std::move(ancilla_wires_));
}

Circuit expand_zero_reflection(int m) {
  if (m < 2)
    throw DomainError("expand_zero_reflection: m must be >= 2 (m = 1 is the plain Z gate)");
  int total = m + (m - 1);
  CircuitBuilder b(total);
  for (int w = m; w < total; ++w) b.mark_ancilla(w);
  for (int w = 0; w < m; ++w) b.one_qubit(x_matrix(), w, "u");
  // AND ladder: ancilla m holds w0 & w1, each later ancilla conjoins the
  // next input.
  b.toffoli(0, 1, m);
  for (int j = 2; j < m; ++j) b.toffoli(m + j - 2, j, m + j - 1);
  b.one_qubit(minus_z_matrix(), total - 1, "u");
  for (int j = m - 1; j >= 2; --j) b.toffoli(m + j - 2, j, m + j - 1);
  b.toffoli(0, 1, m);
  for (int w = m - 1; w >= 0; --w) b.one_qubit(x_matrix(), w, "u");
  return b.build();
}

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json gate_record(const Gate& g) {
  ordered_json rec;
  if (const auto* u = std::get_if<OneQubitGate>(&g)) {
    rec["op"] = u->name == "h" ? "h" : "u";
    rec["wires"] = std::vector<int>{u->wire};
    if (u->name != "h") {
      ordered_json mat = ordered_json::array();
      for (const auto& e : u->m) mat.push_back({e.real(), e.imag()});
      rec["matrix"] = mat;
    }
  } else if (const auto* t = std::get_if<ToffoliGate>(&g)) {
    rec["op"] = "toffoli";
    rec["wires"] = std::vector<int>{t->control1, t->control2, t->target};
  } else if (const auto* q = std::get_if<QueryGate>(&g)) {
    rec["op"] = q->style == QueryStyle::standard ? "query" : "squery";
    std::vector<int> wires = q->address;
    wires.push_back(q->target);
    rec["wires"] = wires;
  } else {
    const auto& zr = std::get<ZeroReflectionGate>(g);
    rec["op"] = "refl0";
    rec["wires"] = zr.wires;
  }
  return rec;
}

}  // namespace

std::string to_jsonl(const Circuit& c, const AlgorithmMetadata* meta) {
  std::ostringstream out;
  write_jsonl(c, out, meta);
  return out.str();
}

void write_jsonl(const Circuit& c, std::ostream& out, const AlgorithmMetadata* meta) {
  ordered_json header;
  header["wires"] = c.num_wires();
  header["ancilla"] = c.ancilla_wires();
  out << header.dump() << '\n';
  for (const auto& g : c.gates()) out << gate_record(g).dump() << '\n';
  if (meta != nullptr) {
    ordered_json trailer;
    trailer["a_known"] = meta->a_known_decimal;
    trailer["address_wires"] = meta->address_wires;
    trailer["flag_wires"] = meta->flag_wires;
    out << trailer.dump() << '\n';
  }
}

ParsedCircuit read_jsonl(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("read_jsonl: empty input");
  ordered_json header;
  try {
    header = ordered_json::parse(line);
  } catch (const std::exception& e) {
    throw IoError(std::string("read_jsonl: bad header: ") + e.what());
  }
  if (!header.contains("wires")) throw IoError("read_jsonl: header lacks \"wires\"");
  int wires = header["wires"].get<int>();
  CircuitBuilder b(wires);
  if (header.contains("ancilla"))
    for (int a : header["ancilla"].get<std::vector<int>>()) b.mark_ancilla(a);

  std::optional<AlgorithmMetadata> meta;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ordered_json rec;
    try {
      rec = ordered_json::parse(line);
    } catch (const std::exception& e) {
      throw IoError(std::string("read_jsonl: bad record: ") + e.what());
    }
    if (rec.contains("a_known")) {
      AlgorithmMetadata m;
      m.a_known_decimal = rec["a_known"].get<std::string>();
      m.address_wires = rec["address_wires"].get<std::vector<int>>();
      m.flag_wires = rec["flag_wires"].get<std::vector<int>>();
      meta = std::move(m);
      continue;
    }
    std::string op = rec.at("op").get<std::string>();
    std::vector<int> w = rec.at("wires").get<std::vector<int>>();
    if (op == "h") {
      if (w.size() != 1) throw IoError("read_jsonl: h record needs one wire");
      b.hadamard(w[0]);
    } else if (op == "u") {
      if (w.size() != 1) throw IoError("read_jsonl: u record needs one wire");
      auto mat = rec.at("matrix");
      if (!mat.is_array() || mat.size() != 4) throw IoError("read_jsonl: bad matrix");
      Matrix2 m2;
      for (size_t i = 0; i < 4; ++i)
        m2[i] = Complex(mat[i][0].get<double>(), mat[i][1].get<double>());
      b.one_qubit(m2, w[0], "u");
    } else if (op == "toffoli") {
      if (w.size() != 3) throw IoError("read_jsonl: toffoli record needs three wires");
      b.toffoli(w[0], w[1], w[2]);
    } else if (op == "query" || op == "squery") {
      if (w.size() < 2) throw IoError("read_jsonl: query record needs address + target");
      int target = w.back();
      w.pop_back();
      b.query(std::move(w), target,
              op == "query" ? QueryStyle::standard : QueryStyle::signed_phase);
    } else if (op == "refl0") {
      b.zero_reflection(std::move(w));
    } else {
      throw IoError("read_jsonl: unknown op \"" + op + "\"");
    }
  }
  return ParsedCircuit{b.build(), std::move(meta)};
}

}  // namespace qsearch::circuit
