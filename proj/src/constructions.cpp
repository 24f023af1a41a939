#include "qsearch/constructions.hpp"

#include <algorithm>
#include <cmath>

namespace qsearch::constructions {

namespace {

constexpr mpfr_prec_t kBuildPrecision = 384;
constexpr mpfr_prec_t kChainPrecisionCap = mpfr_prec_t(1) << 23;

Rational inv_k(long k) { return Rational(1, k); }

long checked_long(const BigInt& v, const char* what) {
  if (!v.fits_slong_p()) throw ResourceError(std::string(what) + " does not fit a machine word");
  return v.get_si();
}

/// w_i is about sqrt(N_i / N_{i-1}), so certifying its ceiling needs
/// roughly (n_i - n_{i-1})/2 bits; the chain as a whole is evaluated at
/// the largest such requirement.
mpfr_prec_t chain_precision(const std::vector<BigInt>& n_seq) {
  BigInt max_gap = n_seq.front();
  for (size_t i = 1; i < n_seq.size(); ++i) {
    BigInt gap = n_seq[i] - n_seq[i - 1];
    if (gap > max_gap) max_gap = gap;
  }
  if (max_gap < 0) max_gap = 64;
  BigInt need = max_gap / 2 + 320;
  if (need > kChainPrecisionCap)
    throw ResourceError("count-only evaluation at this scale needs " + need.get_str() +
                        " bits of precision, above the cap");
  return std::max<mpfr_prec_t>(256, static_cast<mpfr_prec_t>(need.get_si()));
}

std::optional<AmplifyPlan> try_plan_amplify(const Prob& a_in, const Rational& a_prime,
                                            const BigInt& q_in, const BigInt& e_in,
                                            const BigInt& n_tot, mpfr_prec_t prec) {
  AmplifyPlan plan;
  plan.a_prime = a_prime;
  plan.a_in = a_in;
  plan.n_tot = n_tot;

  if (a_in.exact) {
    auto wo = numerics::compute_w_rational(*a_in.exact, a_prime);
    plan.w = wo.w;
    plan.exact_tie = wo.exact_tie;
  } else {
    auto w = numerics::compute_w_interval(a_in.enc, a_prime);
    if (!w) return std::nullopt;
    plan.w = *w;
    plan.exact_tie = false;
  }

  plan.theta = cached_asin_sqrt(a_prime, prec).div_bigint(2 * plan.w + 1);
  Interval a_iv = a_in.at(prec);
  if (plan.exact_tie) {
    plan.a_tilde = a_iv;
    plan.rotation_ratio = 1.0;
    plan.addr_out = Prob::from_rational(a_prime, prec);
  } else {
    plan.a_tilde = plan.theta.sin_().square();
    plan.rotation_ratio = std::clamp(plan.a_tilde.div(a_iv).mid(), 0.0, 1.0);
    // After the rounds, the address wires still hold the residual
    // amplitude that R shunted onto flag = 1:
    //   addr_out = a' + (1 - a') (a - a~) / (1 - a~).
    Interval one = Interval::from_long(1, prec);
    Interval ap = Interval::from_rational(a_prime, prec);
    Interval residue = a_iv.sub(plan.a_tilde).div(one.sub(plan.a_tilde));
    plan.addr_out = Prob::from_interval(ap.add(one.sub(ap).mul(residue)));
  }

  plan.queries_out = (2 * plan.w + 1) * q_in + plan.w;
  plan.gates_out = (2 * plan.w + 1) * (e_in + 1) + 2 * plan.w + plan.w * (4 * n_tot + 3);
  return plan;
}

/// Exact check of log2(2 n^2 k^5) <= n; falls back to a conservative
/// upper bound on the left side when 2^n is too large to materialize.
bool log_bound_holds(const BigInt& n, long k) {
  BigInt lgk = exact_log2(BigInt(k));
  if (n.fits_ulong_p() && n < (1L << 22)) {
    BigInt lhs_operand = 2 * n * n * bigint_pow(BigInt(k), 5);
    return lhs_operand <= pow2(n.get_ui());
  }
  BigInt lhs_upper = 1 + 2 * ceil_log2(n) + 5 * lgk;
  return lhs_upper <= n;
}

}  // namespace

void PreconditionReport::add(const std::string& name, bool holds, const std::string& detail) {
  flags.push_back(PreFlag{name, holds, detail});
}

void PreconditionReport::merge(const PreconditionReport& other) {
  flags.insert(flags.end(), other.flags.begin(), other.flags.end());
}

bool PreconditionReport::all_hold() const {
  return std::all_of(flags.begin(), flags.end(), [](const PreFlag& f) { return f.holds; });
}

std::string PreconditionReport::failing_summary() const {
  std::string out;
  for (const auto& f : flags) {
    if (f.holds) continue;
    if (!out.empty()) out += "; ";
    out += f.name;
    if (!f.detail.empty()) out += " (" + f.detail + ")";
  }
  return out;
}

PreconditionReport PipelinePlan::combined_pre() const {
  PreconditionReport all = schedule_pre;
  for (const auto& lvl : levels) all.merge(lvl.pre);
  return all;
}

RecursionSchedule build_schedule(const BigInt& n_exponent, long k, int r, bool relaxed) {
  if (n_exponent < 1) throw ConfigError("schedule: N must be at least 2");
  if (k < 4 || !is_power_of_two(BigInt(k)))
    throw ConfigError("schedule: k must be a power of 2 with k >= 4");
  if (r < 1) throw ConfigError("schedule: r must be at least 1");

  RecursionSchedule sched;
  sched.k = k;
  sched.r = r;
  BigInt lgk = exact_log2(BigInt(k));

  bool k_small_enough = BigInt(k) <= floor_log2(n_exponent >= 1 ? n_exponent : BigInt(1));
  sched.pre.add("k <= log log N", k_small_enough);
  long lsn = numerics::log_star(n_exponent, numerics::LogStarInput::exponent);
  bool r_ok = r <= lsn;
  sched.pre.add("r <= log* N", r_ok, "log* N = " + std::to_string(lsn));
  if (!relaxed && !k_small_enough)
    throw ConfigError("schedule: k = " + std::to_string(k) + " exceeds log log N");
  if (!relaxed && !r_ok)
    throw ConfigError("schedule: r = " + std::to_string(r) +
                      " exceeds log* N = " + std::to_string(lsn));

  sched.n_seq.assign(static_cast<size_t>(r), BigInt(0));
  sched.n_seq[static_cast<size_t>(r) - 1] = n_exponent;
  for (int i = r; i >= 2; --i) {
    const BigInt& ni = sched.n_seq[static_cast<size_t>(i) - 1];
    BigInt by_log = ceil_log2(ni * ni * bigint_pow(BigInt(k), 3));
    BigInt by_k = BigInt(2 * i + 6) * lgk;
    sched.n_seq[static_cast<size_t>(i) - 2] = std::max(by_log, by_k);
  }

  for (int i = 2; i <= r; ++i) {
    bool ok = sched.n_seq[static_cast<size_t>(i) - 2] + 2 * lgk <=
              sched.n_seq[static_cast<size_t>(i) - 1];
    sched.pre.add("n_" + std::to_string(i - 1) + " + 2 log k <= n_" + std::to_string(i), ok);
  }
  sched.pre.add("n_1 >= 10 log k", sched.n_seq.front() >= 10 * lgk);
  // Per-instance versions of the proof's "sufficiently large N" assumptions.
  sched.pre.add("(2r+6) log k <= ceil(log(n_r^2 k^3))",
                BigInt(2 * r + 6) * lgk <=
                    ceil_log2(n_exponent * n_exponent * bigint_pow(BigInt(k), 3)));
  sched.pre.add("log(2 n_r^2 k^5) <= n_r", log_bound_holds(n_exponent, k));
  return sched;
}

PipelinePlan plan_pipeline(const std::vector<BigInt>& n_seq, long k, bool boost) {
  if (n_seq.empty()) throw ConfigError("pipeline: empty schedule");
  if (k < 2) throw ConfigError("pipeline: k must be at least 2");
  for (size_t i = 1; i < n_seq.size(); ++i)
    if (n_seq[i] <= n_seq[i - 1]) throw ConfigError("pipeline: n sequence must increase");

  PipelinePlan plan;
  plan.k = k;
  plan.target = inv_k(k);
  plan.n_seq = n_seq;
  plan.boosted = boost;

  long n1 = checked_long(n_seq.front(), "n_1");
  if (n1 < 1) throw ConfigError("pipeline: n_1 must be at least 1");
  if (dyadic(static_cast<unsigned long>(n1)) > plan.target)
    throw DomainError("pipeline: 2^-n_1 exceeds the target 1/k");

  for (mpfr_prec_t prec = chain_precision(n_seq);; prec *= 2) {
    if (prec > kChainPrecisionCap)
      throw ResourceError("pipeline: chain not certifiable within the precision cap");
    plan.levels.clear();
    bool retry = false;

    Prob addr = Prob::from_rational(dyadic(static_cast<unsigned long>(n1)), prec);
    BigInt queries = 0;
    BigInt gates = n1;  // the Hadamard transform of the base algorithm
    for (size_t i = 0; i < n_seq.size() && !retry; ++i) {
      LevelPlan lvl;
      lvl.level = static_cast<int>(i) + 1;
      lvl.n_bits = n_seq[i];
      Prob a_in = addr;
      BigInt e_in = gates;
      BigInt n_tot = n_seq[i] + static_cast<long>(i);  // address wires + inner flags
      if (i > 0) {
        BigInt gap = n_seq[i] - n_seq[i - 1];
        if (addr.exact) {
          Rational scaled = *addr.exact / Rational(pow2(gap.get_ui()));
          a_in = Prob::from_rational(scaled, prec);
        } else {
          a_in = Prob::from_interval(addr.enc.mul_pow2(-checked_long(gap, "level gap")));
        }
        e_in = gates + gap;  // prefix Hadamards
        lvl.pre.add("k >= 4", k >= 4);
        lvl.pre.add("n >= m + 2 log k", pow2(gap.get_ui()) >= BigInt(k) * k);
        lvl.pre.add("Q >= k + 2", queries >= k + 2,
                    "Q = " + queries.get_str() + ", k + 2 = " + std::to_string(k + 2));
      } else {
        lvl.pre.add("N_1 >= k^10",
                    pow2(static_cast<unsigned long>(n1)) >= bigint_pow(BigInt(k), 10));
      }
      auto amp = try_plan_amplify(a_in, plan.target, queries, e_in, n_tot, prec);
      if (!amp) {
        retry = true;
        break;
      }
      lvl.amp = std::move(*amp);
      addr = lvl.amp.addr_out;
      queries = lvl.amp.queries_out;
      gates = lvl.amp.gates_out;
      plan.levels.push_back(std::move(lvl));
    }
    if (retry) continue;

    if (boost) {
      LevelPlan lvl;
      lvl.level = static_cast<int>(n_seq.size()) + 1;
      lvl.is_boost = true;
      lvl.n_bits = n_seq.back();
      BigInt n_tot = n_seq.back() + static_cast<long>(n_seq.size());
      BigInt ksq = BigInt(k);  // Q >= sqrt(k): compare Q^2 >= k exactly
      lvl.pre.add("Q >= sqrt(k)", queries * queries >= ksq,
                  "Q = " + queries.get_str());
      auto amp = try_plan_amplify(addr, Rational(1), queries, gates, n_tot, prec);
      if (!amp) continue;
      lvl.amp = std::move(*amp);
      addr = lvl.amp.addr_out;
      plan.levels.push_back(std::move(lvl));
    }

    plan.precision = prec;
    plan.a_known = Prob::from_rational(boost ? Rational(1) : plan.target, prec);
    plan.addr_prob = addr;
    return plan;
  }
}

PipelinePlan plan_recursive(const BigInt& n_exponent, long k, int r, bool boost, bool relaxed) {
  RecursionSchedule sched = build_schedule(n_exponent, k, r, relaxed);
  PipelinePlan plan = plan_pipeline(sched.n_seq, k, boost);
  plan.schedule_pre = sched.pre;
  return plan;
}

Grover02Plan plan_grover02(const BigInt& n_exponent) {
  if (n_exponent < 25) throw ConfigError("grover02: requires n >= 25");
  if (!is_power_of_two(n_exponent))
    throw ConfigError(
        "grover02: k = log log N must be an integer, so n has to be a power of 2");
  Grover02Plan plan;
  plan.k = exact_log2(n_exponent);  // log log N
  BigInt kz(plan.k);
  plan.m = ceil_log2(n_exponent * n_exponent * bigint_pow(kz, 3));
  plan.pre.add("n >= 25", true);
  plan.pre.add("k = log log N >= 4", plan.k >= 4);
  // m + 2 log k <= log(2 n^2 k^5) <= n
  plan.pre.add("2^m k^2 <= 2 n^2 k^5",
               pow2(plan.m.get_ui()) * kz * kz <=
                   2 * n_exponent * n_exponent * bigint_pow(kz, 5));
  plan.pre.add("log(2 n^2 k^5) <= n", log_bound_holds(n_exponent, plan.k));
  plan.pipeline = plan_pipeline({plan.m, n_exponent}, plan.k, /*boost=*/true);
  return plan;
}

MainPlan plan_main_fixed_r(const BigInt& n_exponent, int r, bool relaxed, long k_override) {
  MainPlan plan;
  plan.eps_mode = false;
  plan.r = r;
  if (k_override != 0) {
    plan.kchoice.k = BigInt(k_override);
    plan.kchoice.m = 0;
    plan.kchoice.c = Rational(0);
    plan.pre.add("k overridden", relaxed, "k = " + std::to_string(k_override));
  } else if (relaxed) {
    long lsn = numerics::log_star(n_exponent, numerics::LogStarInput::exponent);
    plan.kchoice = numerics::pick_k_fixed_r_formula(lsn);
    plan.pre.add("k <= log log N", plan.kchoice.k <= floor_log2(n_exponent));
  } else {
    plan.kchoice = numerics::pick_k_fixed_r(n_exponent);
    plan.pre.add("k <= log log N", true);
  }
  long k = checked_long(plan.kchoice.k, "k");
  plan.schedule = build_schedule(n_exponent, k, r, relaxed);
  if (n_exponent < (1L << 22))
    plan.pipeline = plan_pipeline(plan.schedule.n_seq, k, /*boost=*/true);
  return plan;
}

MainPlan plan_main_eps(const BigInt& n_exponent, const Rational& eps, bool relaxed) {
  MainPlan plan;
  plan.eps_mode = true;
  plan.eps = eps;
  long lsn = numerics::log_star(n_exponent, numerics::LogStarInput::exponent);
  plan.r = lsn;
  if (relaxed) {
    plan.kchoice = numerics::pick_k_eps_formula(lsn, eps);
    plan.pre.add("k <= log log N", plan.kchoice.k <= floor_log2(n_exponent));
  } else {
    plan.kchoice = numerics::pick_k_eps(n_exponent, eps);
    plan.pre.add("k <= log log N", true);
  }
  long k = checked_long(plan.kchoice.k, "k");
  plan.schedule = build_schedule(n_exponent, k, static_cast<int>(plan.r), relaxed);
  if (n_exponent < (1L << 22))
    plan.pipeline = plan_pipeline(plan.schedule.n_seq, k, /*boost=*/true);
  return plan;
}

simulator::GoodSet SearchAlgorithm::good_set() const {
  simulator::GoodSet g;
  g.address_wires = address_wires;
  if (!flag_wires.empty()) g.flag_wires = {flag_wires.back()};
  return g;
}

circuit::AlgorithmMetadata SearchAlgorithm::metadata() const {
  circuit::AlgorithmMetadata meta;
  meta.a_known_decimal = a_known.at(256).decimal(40);
  meta.address_wires = address_wires;
  meta.flag_wires = flag_wires;
  return meta;
}

SearchAlgorithm hadamard_base(int n) {
  if (n < 1) throw DomainError("hadamard_base: n must be at least 1");
  circuit::CircuitBuilder b(n);
  for (int w = 0; w < n; ++w) b.hadamard(w);
  SearchAlgorithm alg;
  alg.circ = b.build();
  alg.n = n;
  alg.address_wires.resize(static_cast<size_t>(n));
  for (int w = 0; w < n; ++w) alg.address_wires[static_cast<size_t>(w)] = w;
  alg.a_known = Prob::from_rational(dyadic(static_cast<unsigned long>(n)), kBuildPrecision);
  alg.addr_prob = alg.a_known;
  return alg;
}

SearchAlgorithm amplify_exact(const SearchAlgorithm& alg, const Rational& a_prime) {
  if (a_prime > 1) throw DomainError("amplify_exact: a' must be at most 1");
  if (alg.addr_prob.exact) {
    if (*alg.addr_prob.exact > a_prime)
      throw DomainError("amplify_exact: the tracked success probability exceeds a'");
  } else if (alg.addr_prob.enc.certainly_gt_q(a_prime)) {
    throw DomainError("amplify_exact: the tracked success probability exceeds a'");
  }

  int n_tot = alg.circ.num_wires();
  auto plan = try_plan_amplify(alg.addr_prob, a_prime, alg.counts().queries,
                               alg.counts().elementary_gates, BigInt(n_tot), kBuildPrecision);
  if (!plan)
    throw ResourceError("amplify_exact: could not certify the round count; "
                        "plan the whole pipeline instead");

  int flag = n_tot;
  int total = n_tot + 1;
  // A' = A (x) R on the fresh flag wire.
  circuit::CircuitBuilder aprime_builder(total);
  aprime_builder.append(alg.circ);
  aprime_builder.one_qubit(circuit::lowering_rotation(plan->rotation_ratio), flag, "u");
  circuit::Circuit a_prime_circuit = aprime_builder.build();

  std::vector<int> all_wires(static_cast<size_t>(total));
  for (int w = 0; w < total; ++w) all_wires[static_cast<size_t>(w)] = w;

  circuit::CircuitBuilder b(total);
  b.append(a_prime_circuit);
  long w_rounds = checked_long(plan->w, "w");
  for (long round = 0; round < w_rounds; ++round) {
    b.query(alg.address_wires, flag, circuit::QueryStyle::signed_phase);  // O'_x
    b.append_inverted(a_prime_circuit);
    b.zero_reflection(all_wires);  // D on every wire of A'
    b.append(a_prime_circuit);
  }

  SearchAlgorithm out;
  out.circ = b.build();
  out.n = alg.n;
  out.address_wires = alg.address_wires;
  out.flag_wires = alg.flag_wires;
  out.flag_wires.push_back(flag);
  out.a_known = Prob::from_rational(a_prime, kBuildPrecision);
  out.addr_prob = plan->addr_out;

  auto built = out.counts();
  if (built.queries != plan->queries_out || built.elementary_gates != plan->gates_out)
    throw std::logic_error("amplify_exact: built counts diverge from the planned recurrence");
  return out;
}

SearchAlgorithm build_c1_target(int n1, const Rational& target, long) {
  if (n1 < 1) throw DomainError("build_c1: n1 must be at least 1");
  if (dyadic(static_cast<unsigned long>(n1)) > target)
    throw DomainError("build_c1: target probability is below 2^-n1");
  return amplify_exact(hadamard_base(n1), target);
}

SearchAlgorithm build_c1(int n1, long k) {
  if (k < 2 || !is_power_of_two(BigInt(k)))
    throw DomainError("build_c1: k must be a power of 2 with k >= 2");
  return build_c1_target(n1, inv_k(k), k);
}

SearchAlgorithm lift_target(const SearchAlgorithm& g, int n, const Rational& target,
                            long k_label) {
  if (n <= g.n) throw DomainError("lift: n must exceed the input algorithm's address width");
  int m = g.n;
  int prefix = n - m;
  int flags = static_cast<int>(g.flag_wires.size());
  int total = n + flags;

  // Address block convention: the fresh Hadamard wires form the most
  // significant prefix; the input algorithm's address becomes the suffix.
  std::vector<int> wire_map(static_cast<size_t>(g.circ.num_wires()));
  for (int j = 0; j < m; ++j) wire_map[static_cast<size_t>(g.address_wires[j])] = prefix + j;
  for (int j = 0; j < flags; ++j) wire_map[static_cast<size_t>(g.flag_wires[j])] = n + j;

  std::vector<int> prefix_wires(static_cast<size_t>(prefix));
  for (int w = 0; w < prefix; ++w) prefix_wires[static_cast<size_t>(w)] = w;

  circuit::Circuit embedded =
      g.circ.remapped(wire_map, total).with_query_prefix(prefix_wires);

  circuit::CircuitBuilder b(total);
  for (int w = 0; w < prefix; ++w) b.hadamard(w);
  b.append(embedded);

  SearchAlgorithm a;
  a.circ = b.build();
  a.n = n;
  a.address_wires.resize(static_cast<size_t>(n));
  for (int w = 0; w < n; ++w) a.address_wires[static_cast<size_t>(w)] = w;
  a.flag_wires.resize(static_cast<size_t>(flags));
  for (int j = 0; j < flags; ++j) a.flag_wires[static_cast<size_t>(j)] = n + j;

  // a_A = g . M / N exactly, for the tracked address probability g.
  long shift = prefix;
  if (g.addr_prob.exact) {
    Rational scaled = *g.addr_prob.exact / Rational(pow2(static_cast<unsigned long>(shift)));
    a.addr_prob = Prob::from_rational(scaled, kBuildPrecision);
  } else {
    a.addr_prob = Prob::from_interval(g.addr_prob.enc.mul_pow2(-shift));
  }
  if (g.a_known.exact) {
    Rational scaled = *g.a_known.exact / Rational(pow2(static_cast<unsigned long>(shift)));
    a.a_known = Prob::from_rational(scaled, kBuildPrecision);
  } else {
    a.a_known = Prob::from_interval(g.a_known.enc.mul_pow2(-shift));
  }

  return amplify_exact(a, target);
}

SearchAlgorithm lift(const SearchAlgorithm& g, int n, long k) {
  if (k < 2) throw DomainError("lift: k must be at least 2");
  return lift_target(g, n, inv_k(k), k);
}

SearchAlgorithm boost_to_one(const SearchAlgorithm& alg, long k) {
  Rational target = inv_k(k);
  if (!alg.a_known.exact || *alg.a_known.exact != target)
    throw DomainError("boost_to_one: the algorithm's good-set probability is not exactly 1/k");
  return amplify_exact(alg, Rational(1));
}

SearchAlgorithm build_pipeline(const std::vector<int>& n_seq, long k, bool boost,
                               const BuildOptions& opts, PreconditionReport* report) {
  if (n_seq.empty()) throw ConfigError("build_pipeline: empty n sequence");
  std::vector<BigInt> seq(n_seq.begin(), n_seq.end());
  PipelinePlan plan = plan_pipeline(seq, k, boost);
  if (plan.gates() > opts.max_gates)
    throw ResourceError("build_pipeline: " + plan.gates().get_str() +
                        " gates exceed the materialization budget; use count-only mode");
  PreconditionReport pre = plan.combined_pre();
  if (report != nullptr) *report = pre;
  if (!opts.relaxed && !pre.all_hold())
    throw ConfigError("build_pipeline: paper preconditions unmet (" + pre.failing_summary() +
                      "); pass relaxed mode to build anyway");

  SearchAlgorithm alg = build_c1(n_seq.front(), k);
  for (size_t i = 1; i < n_seq.size(); ++i) alg = lift(alg, n_seq[i], k);
  if (boost) alg = boost_to_one(alg, k);

  if (alg.counts().queries != plan.queries() ||
      alg.counts().elementary_gates != plan.gates())
    throw std::logic_error("build_pipeline: built counts diverge from the plan");
  return alg;
}

SearchAlgorithm build_recursive(int n, long k, int r, const BuildOptions& opts,
                                PreconditionReport* report) {
  RecursionSchedule sched = build_schedule(BigInt(n), k, r, opts.relaxed);
  std::vector<int> seq;
  seq.reserve(sched.n_seq.size());
  for (const auto& v : sched.n_seq) seq.push_back(static_cast<int>(checked_long(v, "n_i")));
  PreconditionReport pre = sched.pre;
  PreconditionReport pipeline_pre;
  SearchAlgorithm alg = build_pipeline(seq, k, /*boost=*/false, opts, &pipeline_pre);
  pre.merge(pipeline_pre);
  if (report != nullptr) *report = pre;
  return alg;
}

}  // namespace qsearch::constructions
