#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qsearch/circuit.hpp"
#include "qsearch/oracle.hpp"

namespace qsearch::simulator {

struct StateVector {
  int num_wires = 0;
  std::vector<circuit::Complex> amp;

  static StateVector zero_state(int num_wires);
  static StateVector basis_state(int num_wires, std::uint64_t index);
  double norm_squared() const;
};

struct RunOptions {
  int max_wires = 26;  // ~1 GiB of amplitudes at 16 bytes each
  bool check_norm_each_gate = false;
  double norm_tol = 1e-12;
};

/// Applies the circuit to |0...0> (or the given initial state) against the
/// database. Queries XOR or phase-flip according to the database contents;
/// zero reflections are applied semantically (sign flip off the all-zeros
/// subspace of their wires), matching the expanded ladder.
StateVector run(const circuit::Circuit& c, const oracle::Database& db, RunOptions opts = {});
StateVector run_from(const circuit::Circuit& c, const oracle::Database& db, StateVector state,
                     RunOptions opts = {});

/// Success predicate: the address wires decode to an index i with x_i = 1
/// and every listed flag wire is 0. Address wires are most significant
/// first.
struct GoodSet {
  std::vector<int> address_wires;
  std::vector<int> flag_wires;
};

double good_probability(const StateVector& state, const GoodSet& good,
                        const oracle::Database& db);

std::uint64_t decode_address(std::uint64_t basis_index, const std::vector<int>& address_wires);

struct ReflectionEquivalence {
  bool equivalent = false;
  circuit::Complex global_phase{0.0, 0.0};
  double max_deviation = 0.0;
};

/// Checks that the expanded Toffoli ladder equals the semantic zero
/// reflection up to a global phase on every basis input, with the ancillas
/// restored. Exhaustive over 2^m inputs; m <= 8.
ReflectionEquivalence verify_reflection_equivalence(int m);

/// Debug dump: raw little-endian (re, im) binary64 pairs in basis order,
/// plus a JSON sidecar at path + ".json" with the wire and gate counts.
void dump_state(const StateVector& state, const std::string& path, std::uint64_t gate_count);

}  // namespace qsearch::simulator
