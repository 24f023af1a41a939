#include "qsearch/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "qsearch/constructions.hpp"
#include "qsearch/estimator.hpp"
#include "qsearch/numerics.hpp"
#include "qsearch/simulator.hpp"

namespace qsearch::verify {

namespace {

using circuit::Circuit;
using circuit::CircuitBuilder;
using circuit::Matrix2;
using constructions::SearchAlgorithm;
using oracle::Database;

class Suite {
 public:
  explicit Suite(const std::string& name) { result_.name = name; }

  void check(bool ok, const std::string& what) {
    ++result_.cases;
    if (!ok) {
      ++result_.failures;
      if (result_.failure_details.size() < 8) result_.failure_details.push_back(what);
    }
  }

  SuiteResult take() { return std::move(result_); }

 private:
  SuiteResult result_;
};

Matrix2 random_unitary(std::mt19937& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2 * M_PI);
  double a = angle(rng), b = angle(rng), t = angle(rng);
  circuit::Complex ea(std::cos(a), std::sin(a));
  circuit::Complex eb(std::cos(b), std::sin(b));
  double c = std::cos(t), s = std::sin(t);
  // Rz(a) Ry(2t) Rz(b) up to phase: generic single-qubit unitary.
  return {ea * c, -ea * std::conj(eb) * s, eb * s, circuit::Complex(c)};
}

Circuit random_circuit(std::mt19937& rng, int wires, int gates) {
  CircuitBuilder b(wires);
  std::uniform_int_distribution<int> wire(0, wires - 1);
  std::uniform_int_distribution<int> kind(0, 5);
  for (int g = 0; g < gates; ++g) {
    switch (kind(rng)) {
      case 0:
        b.hadamard(wire(rng));
        break;
      case 1:
        b.one_qubit(random_unitary(rng), wire(rng), "u");
        break;
      case 2: {
        int c1 = wire(rng), c2 = wire(rng), t = wire(rng);
        if (c1 == c2 || c1 == t || c2 == t) {
          b.one_qubit(circuit::x_matrix(), t, "u");
        } else {
          b.toffoli(c1, c2, t);
        }
        break;
      }
      case 3: {
        // standard query over the low half of the wires
        int addr_bits = std::max(1, wires / 2);
        int target = addr_bits;  // distinct from the address wires
        std::vector<int> addr(static_cast<size_t>(addr_bits));
        for (int j = 0; j < addr_bits; ++j) addr[static_cast<size_t>(j)] = j;
        b.query(addr, target, circuit::QueryStyle::standard);
        break;
      }
      case 4: {
        int addr_bits = std::max(1, wires / 2);
        std::vector<int> addr(static_cast<size_t>(addr_bits));
        for (int j = 0; j < addr_bits; ++j) addr[static_cast<size_t>(j)] = j;
        b.query(addr, wires - 1, circuit::QueryStyle::signed_phase);
        break;
      }
      default: {
        int span = 1 + wire(rng) % std::min(4, wires);
        std::vector<int> zr(static_cast<size_t>(span));
        for (int j = 0; j < span; ++j) zr[static_cast<size_t>(j)] = (wire(rng) + j) % wires;
        std::sort(zr.begin(), zr.end());
        zr.erase(std::unique(zr.begin(), zr.end()), zr.end());
        b.zero_reflection(zr);
        break;
      }
    }
  }
  return b.build();
}

SuiteResult suite_facts(const VerifyOptions& opts) {
  Suite s("facts");
  long alpha_cap = opts.quick ? 10000 : 1000000;
  for (long k = 2; k <= 64; ++k) {
    for (long alpha = k; alpha <= alpha_cap; ++alpha) {
      auto r = numerics::check_fact_ceiling(k, Rational(alpha));
      if (!r.holds)
        s.check(false, "fact 2.3 failed at k=" + std::to_string(k) +
                           ", alpha=" + std::to_string(alpha));
    }
  }
  s.check(true, "fact 2.3 sweep");
  for (long k = 3; k <= 64; ++k)
    for (long i = 2; i <= 32; ++i)
      s.check(numerics::check_fact_iterlog(k, i).holds,
              "fact 2.4 failed at k=" + std::to_string(k) + ", i=" + std::to_string(i));
  return s.take();
}

SuiteResult suite_wbound(const VerifyOptions& opts) {
  Suite s("wbound");
  long n_cap = opts.quick ? 24 : 40;
  long k_cap = opts.quick ? 16 : 64;
  for (long n = 1; n <= n_cap; ++n) {
    for (long k = 2; k <= k_cap; ++k) {
      Rational a = dyadic(static_cast<unsigned long>(n));
      if (a > Rational(1, k)) continue;
      BigInt w = numerics::compute_w(a, Rational(1, k));
      BigInt bound = numerics::paper_w_bound_ceiling(n, k);
      s.check(w <= bound, "w bound failed at n=" + std::to_string(n) +
                              ", k=" + std::to_string(k) + ": w=" + w.get_str() +
                              " > " + bound.get_str());
    }
  }
  return s.take();
}

SuiteResult suite_reflection(const VerifyOptions&) {
  Suite s("reflection");
  for (int m = 2; m <= 8; ++m) {
    auto res = simulator::verify_reflection_equivalence(m);
    s.check(res.equivalent, "ladder != semantic reflection at m=" + std::to_string(m));
    Circuit ladder = circuit::expand_zero_reflection(m);
    s.check(ladder.counts().elementary_gates == 4 * m - 1,
            "ladder gate count != 4m-1 at m=" + std::to_string(m));
    CircuitBuilder b(m);
    std::vector<int> wires(static_cast<size_t>(m));
    for (int j = 0; j < m; ++j) wires[static_cast<size_t>(j)] = j;
    b.zero_reflection(wires);
    s.check(b.build().counts().elementary_gates == 4 * m - 1,
            "macro count != 4m-1 at m=" + std::to_string(m));
  }
  return s.take();
}

SuiteResult suite_inversion(const VerifyOptions& opts) {
  Suite s("inversion");
  std::mt19937 rng(opts.seed);
  Database db = Database::unique_solution(3, 5);
  int rounds = opts.quick ? 10 : 30;
  for (int i = 0; i < rounds; ++i) {
    Circuit c = random_circuit(rng, 6, 40);
    Circuit inv = c.inverted();
    s.check(inv.counts() == c.counts(), "inversion changed counts");
    Circuit round_trip = inv.inverted();
    s.check(round_trip.counts() == c.counts(), "double inversion changed counts");
    std::uniform_int_distribution<std::uint64_t> basis(0, (1ULL << 6) - 1);
    std::uint64_t start = basis(rng);
    auto state = simulator::run_from(c, db, simulator::StateVector::basis_state(6, start), {});
    state = simulator::run_from(inv, db, std::move(state), {});
    double dev = 0;
    for (std::uint64_t idx = 0; idx < state.amp.size(); ++idx) {
      double expect = idx == start ? 1.0 : 0.0;
      dev = std::max(dev, std::abs(std::abs(state.amp[idx]) - expect));
    }
    s.check(dev <= 1e-10, "run(invert(c)) . run(c) deviates by " + std::to_string(dev));
  }
  return s.take();
}

SuiteResult suite_norm(const VerifyOptions& opts) {
  Suite s("norm");
  std::mt19937 rng(opts.seed + 1);
  Database db = Database::unique_solution(4, 11);
  int rounds = opts.quick ? 10 : 50;
  for (int i = 0; i < rounds; ++i) {
    Circuit c = random_circuit(rng, 8, 200);
    simulator::RunOptions ro;
    ro.check_norm_each_gate = true;
    ro.norm_tol = 1e-12;
    bool ok = true;
    std::string err;
    try {
      simulator::run(c, db, ro);
    } catch (const std::exception& e) {
      ok = false;
      err = e.what();
    }
    s.check(ok, "norm drifted: " + err);
  }
  return s.take();
}

void check_algorithm_exactness(Suite& s, const SearchAlgorithm& alg, std::mt19937& rng,
                               const std::string& label) {
  int n = alg.n;
  std::uint64_t size = std::uint64_t(1) << n;
  std::vector<std::uint64_t> solutions;
  if (n <= 10) {
    for (std::uint64_t t = 0; t < size; ++t) solutions.push_back(t);
  } else {
    std::uniform_int_distribution<std::uint64_t> pick(0, size - 1);
    for (int i = 0; i < 16; ++i) solutions.push_back(pick(rng));
  }
  double expected = alg.a_known.approx();
  for (std::uint64_t t : solutions) {
    Database db = Database::unique_solution(n, t);
    auto state = simulator::run(alg.circ, db, {});
    double measured = simulator::good_probability(state, alg.good_set(), db);
    if (std::abs(measured - expected) > 1e-9) {
      s.check(false, label + " at t=" + std::to_string(t) + ": measured " +
                         std::to_string(measured) + " vs " + std::to_string(expected));
    } else {
      s.check(true, "");
    }
  }
}

SuiteResult suite_exactness(const VerifyOptions& opts) {
  Suite s("exactness");
  std::mt19937 rng(opts.seed + 2);
  int n_cap = opts.quick ? 5 : 8;
  for (int n = 2; n <= n_cap; ++n) {
    for (long denom : {2L, 4L, 8L, 1L}) {
      Rational target = denom == 1 ? Rational(1) : Rational(1, denom);
      if (dyadic(static_cast<unsigned long>(n)) > target) continue;
      auto alg = constructions::amplify_exact(constructions::hadamard_base(n), target);
      check_algorithm_exactness(s, alg, rng,
                                "amplify(h^" + std::to_string(n) + ", 1/" +
                                    std::to_string(denom) + ")");
    }
  }
  constructions::BuildOptions relaxed;
  relaxed.relaxed = true;
  auto lifted = constructions::build_pipeline({4, 8}, 4, false, relaxed);
  check_algorithm_exactness(s, lifted, rng, "pipeline [4,8] k=4");
  auto boosted = constructions::build_pipeline({4, 8}, 4, true, relaxed);
  check_algorithm_exactness(s, boosted, rng, "boosted pipeline [4,8] k=4");
  auto small = constructions::build_pipeline({3, 6}, 4, false, relaxed);
  check_algorithm_exactness(s, small, rng, "pipeline [3,6] k=4");
  return s.take();
}

SuiteResult suite_schedule(const VerifyOptions& opts) {
  Suite s("schedule");
  std::vector<long> n_grid = opts.quick ? std::vector<long>{1 << 10, 1 << 12}
                                        : std::vector<long>{1 << 10, 1 << 12, 1 << 16, 1 << 20};
  for (long n : n_grid) {
    long loglogn = static_cast<long>(std::floor(std::log2(static_cast<double>(n))));
    long lsn = numerics::log_star(BigInt(n), numerics::LogStarInput::exponent);
    for (long k = 4; k <= 1024; k *= 2) {
      if (k > loglogn) continue;  // precondition of the theorem
      for (int r = 1; r <= lsn; ++r) {
        auto est = estimator::estimate_recursive(BigInt(n), k, r);
        bool sched_ok = est.schedule.pre.all_hold();
        if (!sched_ok) continue;
        for (const auto& c : est.checks) {
          if (!c.preconditions) continue;
          s.check(c.holds, "bound " + c.name + " failed at n=" + std::to_string(n) +
                               ", k=" + std::to_string(k) + ", r=" + std::to_string(r));
        }
      }
    }
  }
  return s.take();
}

SuiteResult suite_agreement(const VerifyOptions& opts) {
  Suite s("agreement");
  constructions::BuildOptions relaxed;
  relaxed.relaxed = true;

  auto check_instance = [&](const std::vector<int>& seq, long k, bool boost,
                            const std::string& label) {
    std::vector<BigInt> big_seq(seq.begin(), seq.end());
    auto plan = constructions::plan_pipeline(big_seq, k, boost);
    auto alg = constructions::build_pipeline(seq, k, boost, relaxed);
    BigInt planned_q = plan.queries() + opts.count_fault_offset;
    s.check(alg.counts().queries == planned_q,
            label + ": built queries " + alg.counts().queries.get_str() +
                " != estimated " + planned_q.get_str());
    s.check(alg.counts().elementary_gates == plan.gates(),
            label + ": built gates " + alg.counts().elementary_gates.get_str() +
                " != estimated " + plan.gates().get_str());
  };

  check_instance({4, 8}, 4, false, "pipeline [4,8]");
  check_instance({4, 8}, 4, true, "boosted pipeline [4,8]");
  check_instance({3, 6}, 4, false, "pipeline [3,6]");
  check_instance({5}, 8, true, "boosted C1 n=5 k=8");

  // Stepwise: C1 alone against the estimator's level-1 row.
  std::vector<estimator::BoundCheck> checks;
  auto c1_est = estimator::estimate_c1(4, 4, &checks);
  auto c1 = constructions::build_c1(4, 4);
  s.check(c1.counts().queries == c1_est.q_i + opts.count_fault_offset,
          "C1 queries disagree with the estimator");
  s.check(c1.counts().elementary_gates == c1_est.e_i, "C1 gates disagree with the estimator");
  return s.take();
}

SuiteResult suite_export(const VerifyOptions&) {
  Suite s("export");
  constructions::BuildOptions relaxed;
  relaxed.relaxed = true;
  auto alg = constructions::build_pipeline({4, 8}, 4, false, relaxed);
  auto meta = alg.metadata();
  std::string first = circuit::to_jsonl(alg.circ, &meta);
  std::string second = circuit::to_jsonl(alg.circ, &meta);
  s.check(first == second, "export is not byte-stable across calls");

  std::istringstream in(first);
  auto parsed = circuit::read_jsonl(in);
  s.check(parsed.circuit.counts() == alg.circ.counts(), "round-trip changed counts");
  s.check(parsed.meta.has_value() && parsed.meta->address_wires == alg.address_wires,
          "round-trip lost metadata");

  Database db = Database::unique_solution(8, 37);
  auto before = simulator::run(alg.circ, db, {});
  auto after = simulator::run(parsed.circuit, db, {});
  double dev = 0;
  for (size_t i = 0; i < before.amp.size(); ++i)
    dev = std::max(dev, std::abs(before.amp[i] - after.amp[i]));
  s.check(dev <= 1e-12, "round-trip changed simulated behavior by " + std::to_string(dev));
  return s.take();
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"facts",     "wbound",   "reflection", "inversion", "norm",
          "exactness", "schedule", "agreement",  "export"};
}

std::vector<SuiteResult> run_suites(const std::vector<std::string>& only,
                                    const VerifyOptions& opts) {
  auto wanted = [&](const std::string& name) {
    return only.empty() || std::find(only.begin(), only.end(), name) != only.end();
  };
  std::vector<SuiteResult> results;
  if (wanted("facts")) results.push_back(suite_facts(opts));
  if (wanted("wbound")) results.push_back(suite_wbound(opts));
  if (wanted("reflection")) results.push_back(suite_reflection(opts));
  if (wanted("inversion")) results.push_back(suite_inversion(opts));
  if (wanted("norm")) results.push_back(suite_norm(opts));
  if (wanted("exactness")) results.push_back(suite_exactness(opts));
  if (wanted("schedule")) results.push_back(suite_schedule(opts));
  if (wanted("agreement")) results.push_back(suite_agreement(opts));
  if (wanted("export")) results.push_back(suite_export(opts));
  return results;
}

}  // namespace qsearch::verify
