#include "qsearch/simulator.hpp"

#include <cmath>
#include <fstream>

#include "json.hpp"

namespace qsearch::simulator {

namespace {

using circuit::Complex;

void apply_one_qubit(std::vector<Complex>& amp, int num_wires, const circuit::Matrix2& m,
                     int wire) {
  const std::uint64_t mask = std::uint64_t(1) << wire;
  const std::uint64_t lo_mask = mask - 1;
  const std::uint64_t hi_mask = ~lo_mask;
  const std::uint64_t half = std::uint64_t(1) << (num_wires - 1);
  for (std::uint64_t i = 0; i < half; ++i) {
    std::uint64_t i0 = ((i & hi_mask) << 1) | (i & lo_mask);
    std::uint64_t i1 = i0 | mask;
    Complex a0 = amp[i0];
    Complex a1 = amp[i1];
    amp[i0] = m[0] * a0 + m[1] * a1;
    amp[i1] = m[2] * a0 + m[3] * a1;
  }
}

void apply_toffoli(std::vector<Complex>& amp, int num_wires, const circuit::ToffoliGate& g) {
  const std::uint64_t c1 = std::uint64_t(1) << g.control1;
  const std::uint64_t c2 = std::uint64_t(1) << g.control2;
  const std::uint64_t t = std::uint64_t(1) << g.target;
  const std::uint64_t size = std::uint64_t(1) << num_wires;
  for (std::uint64_t s = 0; s < size; ++s) {
    if ((s & c1) && (s & c2) && !(s & t)) std::swap(amp[s], amp[s | t]);
  }
}

void apply_query(std::vector<Complex>& amp, int num_wires, const circuit::QueryGate& g,
                 const oracle::Database& db) {
  const std::uint64_t size = std::uint64_t(1) << num_wires;
  const std::uint64_t t = std::uint64_t(1) << g.target;
  if (g.style == circuit::QueryStyle::standard) {
    for (std::uint64_t s = 0; s < size; ++s) {
      if (s & t) continue;
      if (db.bit(decode_address(s, g.address))) std::swap(amp[s], amp[s | t]);
    }
  } else {
    // Phase -1 exactly on x_i = 1 and flag = 0.
    for (std::uint64_t s = 0; s < size; ++s) {
      if (s & t) continue;
      if (db.bit(decode_address(s, g.address))) amp[s] = -amp[s];
    }
  }
}

void apply_zero_reflection(std::vector<Complex>& amp, int num_wires,
                           const circuit::ZeroReflectionGate& g) {
  std::uint64_t mask = 0;
  for (int w : g.wires) mask |= std::uint64_t(1) << w;
  const std::uint64_t size = std::uint64_t(1) << num_wires;
  for (std::uint64_t s = 0; s < size; ++s) {
    if (s & mask) amp[s] = -amp[s];
  }
}

}  // namespace

StateVector StateVector::zero_state(int num_wires) { return basis_state(num_wires, 0); }

StateVector StateVector::basis_state(int num_wires, std::uint64_t index) {
  if (num_wires < 1 || num_wires > 40)
    throw DomainError("StateVector: unsupported wire count");
  StateVector s;
  s.num_wires = num_wires;
  s.amp.assign(std::uint64_t(1) << num_wires, Complex(0.0));
  s.amp[index] = Complex(1.0);
  return s;
}

double StateVector::norm_squared() const {
  double total = 0.0;
  for (const auto& a : amp) total += std::norm(a);
  return total;
}

std::uint64_t decode_address(std::uint64_t basis_index, const std::vector<int>& address_wires) {
  std::uint64_t i = 0;
  for (int w : address_wires) i = (i << 1) | ((basis_index >> w) & 1);
  return i;
}

StateVector run(const circuit::Circuit& c, const oracle::Database& db, RunOptions opts) {
  return run_from(c, db, StateVector::zero_state(c.num_wires()), opts);
}

StateVector run_from(const circuit::Circuit& c, const oracle::Database& db, StateVector state,
                     RunOptions opts) {
  if (c.num_wires() > opts.max_wires)
    throw ResourceError("simulation needs " + std::to_string(c.num_wires()) +
                        " wires, above the cap of " + std::to_string(opts.max_wires) +
                        "; use count-only mode or raise --max-sim-wires");
  if (state.num_wires != c.num_wires())
    throw DomainError("run_from: initial state has the wrong wire count");
  for (const auto& g : c.gates()) {
    if (const auto* u = std::get_if<circuit::OneQubitGate>(&g)) {
      apply_one_qubit(state.amp, state.num_wires, u->m, u->wire);
    } else if (const auto* t = std::get_if<circuit::ToffoliGate>(&g)) {
      apply_toffoli(state.amp, state.num_wires, *t);
    } else if (const auto* q = std::get_if<circuit::QueryGate>(&g)) {
      apply_query(state.amp, state.num_wires, *q, db);
    } else {
      apply_zero_reflection(state.amp, state.num_wires,
                            std::get<circuit::ZeroReflectionGate>(g));
    }
    if (opts.check_norm_each_gate) {
      double ns = state.norm_squared();
      if (std::abs(ns - 1.0) > opts.norm_tol)
        throw std::logic_error("norm drifted to " + std::to_string(ns) +
                               " during simulation");
    }
  }
  double ns = state.norm_squared();
  if (std::abs(ns - 1.0) > 1e-9)
    throw std::logic_error("final norm " + std::to_string(ns) + " is not 1");
  return state;
}

double good_probability(const StateVector& state, const GoodSet& good,
                        const oracle::Database& db) {
  std::uint64_t flag_mask = 0;
  for (int w : good.flag_wires) flag_mask |= std::uint64_t(1) << w;
  double total = 0.0;
  const std::uint64_t size = std::uint64_t(1) << state.num_wires;
  for (std::uint64_t s = 0; s < size; ++s) {
    if (s & flag_mask) continue;
    if (db.bit(decode_address(s, good.address_wires))) total += std::norm(state.amp[s]);
  }
  return total;
}

ReflectionEquivalence verify_reflection_equivalence(int m) {
  if (m < 2 || m > 8)
    throw DomainError("verify_reflection_equivalence: m must be in [2, 8]");
  circuit::Circuit ladder = circuit::expand_zero_reflection(m);
  oracle::Database dummy = oracle::Database::unique_solution(1, 0);
  RunOptions opts;
  ReflectionEquivalence res;
  res.equivalent = true;
  bool phase_set = false;
  const std::uint64_t inputs = std::uint64_t(1) << m;
  const std::uint64_t total = std::uint64_t(1) << ladder.num_wires();
  for (std::uint64_t v = 0; v < inputs; ++v) {
    StateVector out =
        run_from(ladder, dummy, StateVector::basis_state(ladder.num_wires(), v), opts);
    // Semantic reflection: +|v> for v = 0, -|v> otherwise, ancillas at 0.
    double expected_sign = (v == 0) ? 1.0 : -1.0;
    Complex at_v = out.amp[v];
    Complex phase = at_v * expected_sign;
    if (!phase_set) {
      res.global_phase = phase;
      phase_set = true;
    }
    double dev = std::abs(phase - res.global_phase);
    if (std::abs(std::abs(at_v) - 1.0) > 1e-12) res.equivalent = false;
    for (std::uint64_t s = 0; s < total; ++s) {
      if (s == v) continue;
      dev = std::max(dev, std::abs(out.amp[s]));
    }
    res.max_deviation = std::max(res.max_deviation, dev);
    if (dev > 1e-12) res.equivalent = false;
  }
  return res;
}

void dump_state(const StateVector& state, const std::string& path, std::uint64_t gate_count) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("dump_state: cannot open " + path);
  for (const auto& a : state.amp) {
    double re = a.real(), im = a.imag();
    out.write(reinterpret_cast<const char*>(&re), sizeof re);
    out.write(reinterpret_cast<const char*>(&im), sizeof im);
  }
  if (!out) throw IoError("dump_state: short write to " + path);
  nlohmann::ordered_json header;
  header["wires"] = state.num_wires;
  header["gates"] = gate_count;
  std::ofstream side(path + ".json");
  if (!side) throw IoError("dump_state: cannot open " + path + ".json");
  side << header.dump() << '\n';
}

}  // namespace qsearch::simulator
