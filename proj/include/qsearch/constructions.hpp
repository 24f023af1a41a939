#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qsearch/circuit.hpp"
#include "qsearch/numerics.hpp"
#include "qsearch/simulator.hpp"

namespace qsearch::constructions {

using numerics::Prob;

struct PreFlag {
  std::string name;
  bool holds;
  std::string detail;
};

struct PreconditionReport {
  std::vector<PreFlag> flags;
  void add(const std::string& name, bool holds, const std::string& detail = "");
  void merge(const PreconditionReport& other);
  bool all_hold() const;
  std::string failing_summary() const;
};

/// Scalar outcome of one exact-amplification application. The input
/// probability is the exactly tracked chance that measuring the input
/// algorithm's address wires yields the solution (inner flags free); the
/// output good-set probability is a_prime exactly.
struct AmplifyPlan {
  BigInt w;
  Rational a_prime;
  Prob a_in;
  Prob addr_out;  // address probability after amplification
  Interval theta{64};
  Interval a_tilde{64};
  bool exact_tie = false;  // a_tilde == a_in exactly; R is the identity
  double rotation_ratio = 1.0;
  BigInt queries_out;
  BigInt gates_out;
  BigInt n_tot;  // wire count of the amplified algorithm (before the new flag)
};

/// One recursion level: C1 at level 1, a lift at levels 2..r, and a final
/// boost level when requested.
struct LevelPlan {
  int level = 0;
  bool is_boost = false;
  BigInt n_bits;  // address width after this level
  AmplifyPlan amp;
  PreconditionReport pre;
};

struct RecursionSchedule {
  long k = 0;
  int r = 0;
  std::vector<BigInt> n_seq;  // n_1 <= ... <= n_r
  PreconditionReport pre;
};

/// n_r = log N, n_{i-1} = max{(2i+6) log k, ceil(log(n_i^2 k^3))}.
/// Strict mode enforces k a power of two in [4, log log N] and
/// 1 <= r <= log* N; relaxed mode records the failures and proceeds.
RecursionSchedule build_schedule(const BigInt& n_exponent, long k, int r, bool relaxed = false);

struct PipelinePlan {
  long k = 0;
  Rational target;  // 1/k
  std::vector<BigInt> n_seq;
  bool boosted = false;
  std::vector<LevelPlan> levels;
  mpfr_prec_t precision = 0;
  PreconditionReport schedule_pre;
  Prob a_known;    // final good-set probability
  Prob addr_prob;  // final address probability

  const BigInt& queries() const { return levels.back().amp.queries_out; }
  const BigInt& gates() const { return levels.back().amp.gates_out; }
  PreconditionReport combined_pre() const;
};

/// Count-only evaluation of the recursion: exact w_i, Q_i, E_i at any
/// scale, with every ceiling certified by escalating-precision interval
/// arithmetic.
PipelinePlan plan_pipeline(const std::vector<BigInt>& n_seq, long k, bool boost);
PipelinePlan plan_recursive(const BigInt& n_exponent, long k, int r, bool boost,
                            bool relaxed = false);

struct Grover02Plan {
  long k = 0;  // log log N, an integer for N = 2^(2^j)
  BigInt m;    // ceil(log(n^2 k^3))
  PipelinePlan pipeline;
  PreconditionReport pre;
};
/// The single-lift recipe: C1 on m wires at probability 1/(log log N),
/// lifted once to n, then boosted to 1. Requires n >= 25 and integer
/// log log N (N = 2^(2^j)).
Grover02Plan plan_grover02(const BigInt& n_exponent);

struct MainPlan {
  bool eps_mode = false;
  Rational eps;
  numerics::KChoice kchoice;
  long r = 0;
  RecursionSchedule schedule;
  std::optional<PipelinePlan> pipeline;  // absent when counts are not materializable
  PreconditionReport pre;
};
/// Top-level parameter recipes: fixed r with k = (c1 log* N)^2, or
/// r = log* N with k = (c2 (log* N + 2))^2 chosen from epsilon.
MainPlan plan_main_fixed_r(const BigInt& n_exponent, int r, bool relaxed = false,
                           long k_override = 0);
MainPlan plan_main_eps(const BigInt& n_exponent, const Rational& eps, bool relaxed = false);

/// A circuit plus the analytically tracked probabilities. a_known is the
/// good-set probability (address = solution and the outermost flag 0);
/// addr_prob is the probability that measuring the address wires alone
/// yields the solution, which is what the next amplification level feeds
/// on.
struct SearchAlgorithm {
  circuit::Circuit circ;
  int n = 0;
  std::vector<int> address_wires;
  std::vector<int> flag_wires;
  Prob a_known;
  Prob addr_prob;

  circuit::CountReport counts() const { return circ.counts(); }
  simulator::GoodSet good_set() const;
  circuit::AlgorithmMetadata metadata() const;
};

SearchAlgorithm hadamard_base(int n);

/// Exact amplitude amplification: appends a fresh flag wire carrying the
/// lowering rotation R, then w rounds of Q = A' D (A')^-1 O'_x. The new
/// good-set probability is exactly a_prime.
SearchAlgorithm amplify_exact(const SearchAlgorithm& alg, const Rational& a_prime);

/// C1: amplify n1 Hadamards from 2^-n1 to exactly 1/k (k a power of two).
SearchAlgorithm build_c1(int n1, long k);
/// Same construction with an arbitrary rational target probability.
SearchAlgorithm build_c1_target(int n1, const Rational& target, long k_label);

/// The database lift: H on n - m fresh prefix wires, the input algorithm
/// on the suffix with every query extended by the prefix address, then
/// amplification back to exactly 1/k.
SearchAlgorithm lift(const SearchAlgorithm& g, int n, long k);
SearchAlgorithm lift_target(const SearchAlgorithm& g, int n, const Rational& target,
                            long k_label);

/// Amplify a probability-1/k algorithm to success probability 1.
SearchAlgorithm boost_to_one(const SearchAlgorithm& alg, long k);

struct BuildOptions {
  bool relaxed = false;
  /// Builders refuse to materialize more gates than this.
  BigInt max_gates = BigInt(5000000);
};

/// C1 followed by lifts along n_seq, optionally boosted. The relaxed flag
/// permits parameters that violate the paper's count-bound preconditions
/// (probability exactness still holds); the report says which failed.
SearchAlgorithm build_pipeline(const std::vector<int>& n_seq, long k, bool boost,
                               const BuildOptions& opts = {},
                               PreconditionReport* report = nullptr);

/// Strict-schedule build (usually only count-feasible; circuits at real
/// schedules are too large to materialize and raise ResourceError).
SearchAlgorithm build_recursive(int n, long k, int r, const BuildOptions& opts = {},
                                PreconditionReport* report = nullptr);

}  // namespace qsearch::constructions
