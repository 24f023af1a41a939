#include "qsearch/oracle.hpp"

#include <cctype>

namespace qsearch::oracle {

Database::Database(int n, std::vector<bool> bits) : n_(n), bits_(std::move(bits)) {
  if (n < 1) throw DomainError("Database: address width must be at least 1");
  if (n > 40) throw ResourceError("Database: address width beyond 40 bits is not materializable");
  if (bits_.size() != (std::uint64_t(1) << n))
    throw DomainError("Database: bit string length must be exactly 2^n");
}

Database Database::unique_solution(int n, std::uint64_t t) {
  if (n < 1) throw DomainError("Database: address width must be at least 1");
  if (n > 40) throw ResourceError("Database: address width beyond 40 bits is not materializable");
  std::uint64_t size = std::uint64_t(1) << n;
  if (t >= size)
    throw DomainError("Database: solution index " + std::to_string(t) + " out of range for n = " +
                      std::to_string(n));
  std::vector<bool> bits(size, false);
  bits[t] = true;
  return Database(n, std::move(bits));
}

Database Database::from_hex(int n, const std::string& hex) {
  if (n < 2) throw DomainError("Database::from_hex: needs n >= 2 (whole hex digits)");
  std::uint64_t size = std::uint64_t(1) << n;
  if (hex.size() * 4 != size)
    throw DomainError("Database::from_hex: expected exactly " + std::to_string(size / 4) +
                      " hex digits for n = " + std::to_string(n));
  std::vector<bool> bits(size, false);
  for (size_t d = 0; d < hex.size(); ++d) {
    char c = hex[d];
    int v;
    if (c >= '0' && c <= '9') v = c - '0';
    else if (c >= 'a' && c <= 'f') v = 10 + (c - 'a');
    else if (c >= 'A' && c <= 'F') v = 10 + (c - 'A');
    else throw DomainError("Database::from_hex: invalid hex digit");
    for (int b = 0; b < 4; ++b) bits[4 * d + b] = ((v >> (3 - b)) & 1) != 0;
  }
  return Database(n, std::move(bits));
}

std::uint64_t Database::hamming_weight() const {
  std::uint64_t w = 0;
  for (bool b : bits_) w += b ? 1 : 0;
  return w;
}

bool Database::has_unique_solution() const { return hamming_weight() == 1; }

std::uint64_t Database::solution() const {
  if (!has_unique_solution())
    throw DomainError("Database::solution: database does not have a unique solution");
  for (std::uint64_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) return i;
  return 0;  // unreachable
}

std::string Database::to_bit_string() const {
  std::string s;
  s.reserve(bits_.size());
  for (bool b : bits_) s.push_back(b ? '1' : '0');
  return s;
}

circuit::Gate standard_query_gate(std::vector<int> address_wires, int target_wire) {
  return circuit::QueryGate{std::move(address_wires), target_wire,
                            circuit::QueryStyle::standard};
}

circuit::Gate signed_query_gate(std::vector<int> address_wires, int flag_wire) {
  return circuit::QueryGate{std::move(address_wires), flag_wire,
                            circuit::QueryStyle::signed_phase};
}

circuit::Circuit signed_query_fragment(int num_wires, std::vector<int> address_wires,
                                       int flag_wire) {
  circuit::CircuitBuilder b(num_wires);
  b.one_qubit(circuit::hx_matrix(), flag_wire, "u");
  b.query(std::move(address_wires), flag_wire, circuit::QueryStyle::standard);
  b.one_qubit(circuit::xh_matrix(), flag_wire, "u");
  return b.build();
}

circuit::Circuit phase_query_fragment(int num_wires, std::vector<int> address_wires,
                                      int work_wire) {
  circuit::CircuitBuilder b(num_wires);
  b.one_qubit(circuit::x_matrix(), work_wire, "u");
  b.hadamard(work_wire);
  b.query(std::move(address_wires), work_wire, circuit::QueryStyle::standard);
  b.hadamard(work_wire);
  b.one_qubit(circuit::x_matrix(), work_wire, "u");
  return b.build();
}

}  // namespace qsearch::oracle
