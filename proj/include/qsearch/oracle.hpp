#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qsearch/circuit.hpp"
#include "qsearch/errors.hpp"

namespace qsearch::oracle {

/// The black-box database: an N-bit string over n address bits, N = 2^n.
/// Circuits never bake the contents in; the simulator reads it at run time.
class Database {
 public:
  Database(int n, std::vector<bool> bits);

  static Database unique_solution(int n, std::uint64_t t);
  /// Hex literal, most significant nibble first; bit 0 of the database is
  /// the top bit of the first digit. Length must be exactly N/4 digits.
  static Database from_hex(int n, const std::string& hex);

  int n() const { return n_; }
  std::uint64_t size() const { return std::uint64_t(1) << n_; }
  bool bit(std::uint64_t index) const { return bits_[index]; }
  std::uint64_t hamming_weight() const;
  bool has_unique_solution() const;
  /// The unique solution index; requires hamming weight 1.
  std::uint64_t solution() const;
  /// Bits as a 0/1 string, x_0 first.
  std::string to_bit_string() const;

 private:
  int n_;
  std::vector<bool> bits_;
};

/// O_x: |i, b> -> |i, b xor x_i>. Counted as 1 query, 0 elementary gates.
circuit::Gate standard_query_gate(std::vector<int> address_wires, int target_wire);

/// O'_x as a single gate: phase -1 exactly when x_i = 1 and the flag wire
/// is 0. Counted as 1 query + 2 elementary gates (the XH sandwich).
circuit::Gate signed_query_gate(std::vector<int> address_wires, int flag_wire);

/// O'_x written out: HX(flag), O_x, XH(flag) on flag_wire. Same action and
/// the same count as signed_query_gate.
circuit::Circuit signed_query_fragment(int num_wires, std::vector<int> address_wires,
                                       int flag_wire);

/// Phase query |i> -> (-1)^{x_i} |i> by kickback through a work wire that
/// starts and ends in |0>: X, H, O_x, H, X on the work wire.
circuit::Circuit phase_query_fragment(int num_wires, std::vector<int> address_wires,
                                      int work_wire);

}  // namespace qsearch::oracle
