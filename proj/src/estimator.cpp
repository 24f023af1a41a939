#include "qsearch/estimator.hpp"

#include <sstream>

#include "json.hpp"

namespace qsearch::estimator {

namespace {

constexpr mpfr_prec_t kPiPrecision = 320;  // enclosure of pi within 2^-256

BigInt materialize_pow2(const BigInt& e) {
  if (e < 0) throw DomainError("materialize_pow2: negative exponent");
  if (e > (1L << 22))
    throw ResourceError("exact bound check would need 2^" + e.get_str() +
                        "; beyond the materialization range");
  return pow2(e.get_ui());
}

std::string q_str(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_str();
}

BoundCheck make_check(const std::string& name, const std::string& lhs, const std::string& rhs,
                      bool holds, bool preconditions, const std::string& note = "") {
  return BoundCheck{name, lhs, rhs, holds, preconditions, note};
}

Rational rational_pow(const Rational& base, unsigned long e) {
  Rational num(bigint_pow(BigInt(base.get_num()), e));
  Rational den(bigint_pow(BigInt(base.get_den()), e));
  return num / den;
}

}  // namespace

bool RecursiveEstimate::clean() const {
  for (const auto& c : checks)
    if (c.preconditions && !c.holds) return false;
  return true;
}

bool le_coef_sqrt_pow2(const Rational& lhs, const Rational& coef, const BigInt& exp2) {
  if (lhs < 0) return true;
  if (coef < 0) return false;
  return lhs * lhs <= coef * coef * Rational(materialize_pow2(exp2));
}

bool ge_coef_sqrt_pow2(const Rational& lhs, const Rational& coef, const BigInt& exp2) {
  if (lhs < 0) return false;
  if (coef < 0) return true;
  return lhs * lhs >= coef * coef * Rational(materialize_pow2(exp2));
}

bool le_pi_bound(const BigInt& lhs, long pi_div, const Rational& coef, const BigInt& exp2,
                 const Interval& extra_factor) {
  Interval rhs = Interval::pi(kPiPrecision)
                     .div_bigint(BigInt(pi_div))
                     .mul(Interval::from_rational(coef, kPiPrecision));
  if (exp2 != 0) {
    if (!exp2.fits_slong_p()) throw ResourceError("le_pi_bound: exponent out of range");
    rhs = rhs.mul(Interval::exact_pow2(exp2.get_si(), kPiPrecision).sqrt_());
  }
  rhs = rhs.mul(extra_factor.rounded_to(kPiPrecision));
  return Interval::from_bigint(lhs, kPiPrecision).certainly_le(rhs);
}

ResourceEstimate estimate_c1(int n1, long k, std::vector<BoundCheck>* checks) {
  if (n1 < 1 || k < 2) throw DomainError("estimate_c1: need n1 >= 1 and k >= 2");
  Rational a = dyadic(static_cast<unsigned long>(n1));
  Rational target(1, k);
  if (a > target) throw DomainError("estimate_c1: 2^-n1 exceeds 1/k");
  ResourceEstimate est;
  est.level = 1;
  est.n_i = n1;
  est.w_i = numerics::compute_w(a, target);
  est.q_i = est.w_i;
  est.e_i = (2 * est.w_i + 1) * (n1 + 1) + 2 * est.w_i + est.w_i * (4 * BigInt(n1) + 3);
  bool big_enough = pow2(static_cast<unsigned long>(n1)) >= bigint_pow(BigInt(k), 10);
  est.pre.add("N_1 >= k^10", big_enough);
  if (checks != nullptr) {
    BigInt ceiling = numerics::paper_w_bound_ceiling(n1, k);
    checks->push_back(make_check("c1.w_ceiling", est.w_i.get_str(), ceiling.get_str(),
                                 est.w_i <= ceiling, true,
                                 "Q_1 <= ceil(sqrt(N_1)(1+1/k)/(2 sqrt k) - 1/2)"));
    checks->push_back(make_check("c1.queries_at_least_k_plus_2", est.q_i.get_str(),
                                 std::to_string(k + 2), est.q_i >= k + 2, big_enough));
    // E_1 <= 4 sqrt(N_1) (1+3/k) n_1 / sqrt(k)  <=>  E_1 sqrt(k) <= 4 sqrt(N_1)(1+3/k) n_1
    Rational coef = 4 * Rational(k + 3, k) * n1;
    bool e_ok = le_coef_sqrt_pow2(Rational(est.e_i) * k, coef * k, BigInt(n1));
    checks->push_back(make_check("c1.gate_bound", est.e_i.get_str(),
                                 "4 sqrt(N_1)(1+3/k) n_1 / sqrt(k)", e_ok, big_enough));
  }
  return est;
}

namespace {

void append_level_checks(std::vector<BoundCheck>& checks,
                         const std::vector<ResourceEstimate>& levels, long k,
                         bool schedule_pre_ok) {
  for (size_t i = 0; i < levels.size(); ++i) {
    const auto& cur = levels[i];
    if (cur.is_boost) continue;
    bool pre_ok = schedule_pre_ok && cur.pre.all_hold();
    std::string tag = "level" + std::to_string(cur.level);
    // Claim: E_i >= sqrt(N_i / 4k), squared: E_i^2 4k >= 2^{n_i}.
    bool e_low = Rational(cur.e_i) * cur.e_i * 4 * k >= Rational(materialize_pow2(cur.n_i));
    checks.push_back(make_check(tag + ".gates_at_least_sqrt(N_i/4k)", cur.e_i.get_str(),
                                "sqrt(2^" + cur.n_i.get_str() + "/" + std::to_string(4 * k) +
                                    ")",
                                e_low, pre_ok));
    if (i == 0) continue;
    const auto& prev = levels[i - 1];
    // Theorem-level recursion: Q_i <= sqrt(N_i/N_{i-1}) Q_{i-1} (1+4/k).
    bool pre_i = pre_ok && prev.pre.all_hold();
    bool q_rec = le_coef_sqrt_pow2(Rational(cur.q_i), Rational(prev.q_i) * Rational(k + 4, k),
                                   cur.n_i - prev.n_i);
    checks.push_back(make_check(tag + ".queries_recursion", cur.q_i.get_str(),
                                "sqrt(N_i/N_{i-1}) Q_{i-1} (1+4/k)", q_rec, pre_i));
    // Theorem bounds on E': E_{i-1} sqrt(N/M) <= E_i <= (3 n_i + E_{i-1}) sqrt(N/M)(1+3/k).
    bool e_lower = ge_coef_sqrt_pow2(Rational(cur.e_i), Rational(prev.e_i),
                                     cur.n_i - prev.n_i);
    checks.push_back(make_check(tag + ".gates_lower", cur.e_i.get_str(),
                                "E_{i-1} sqrt(N_i/N_{i-1})", e_lower, pre_i));
    bool e_upper = le_coef_sqrt_pow2(
        Rational(cur.e_i), (3 * Rational(cur.n_i) + prev.e_i) * Rational(k + 3, k),
        cur.n_i - prev.n_i);
    checks.push_back(make_check(tag + ".gates_upper", cur.e_i.get_str(),
                                "(3 n_i + E_{i-1}) sqrt(N_i/N_{i-1})(1+3/k)", e_upper, pre_i));
  }
}

void append_final_checks(std::vector<BoundCheck>& checks,
                         const std::vector<ResourceEstimate>& levels, long k, int r,
                         const BigInt& n1, bool pre_ok) {
  const ResourceEstimate* last_core = nullptr;
  const ResourceEstimate* boost = nullptr;
  for (const auto& lvl : levels) {
    if (lvl.is_boost) boost = &lvl;
    else last_core = &lvl;
  }
  if (last_core == nullptr) return;
  // Q_r <= sqrt(N / 4k) (1 + 4/k)^r, squared: Q^2 4k <= 2^n (1+4/k)^{2r}
  Rational qcoef = rational_pow(Rational(k + 4, k), static_cast<unsigned long>(r));
  bool q_ok = Rational(last_core->q_i) * last_core->q_i * 4 * k <=
              Rational(materialize_pow2(last_core->n_i)) * qcoef * qcoef;
  checks.push_back(make_check("thm33.queries", last_core->q_i.get_str(),
                              "sqrt(N/4k)(1+4/k)^r", q_ok, pre_ok));
  // E_r <= 4 sqrt(N/k) (1+6/k)^{2r-1} n_1
  Rational ecoef = 4 * rational_pow(Rational(k + 6, k), static_cast<unsigned long>(2 * r - 1)) *
                   Rational(n1);
  bool e_ok = Rational(last_core->e_i) * last_core->e_i * k <=
              Rational(materialize_pow2(last_core->n_i)) * ecoef * ecoef;
  checks.push_back(make_check("thm33.gates", last_core->e_i.get_str(),
                              "4 sqrt(N/k)(1+6/k)^{2r-1} n_1", e_ok, pre_ok));
  if (boost != nullptr) {
    // Corollary: boosted queries <= (pi/2) Q sqrt(k) (1 + 2/sqrt k)^2.
    bool guard = Rational(last_core->q_i) * last_core->q_i >= k;
    Interval factor = Interval::from_long(1, kPiPrecision)
                          .add(Interval::from_long(4, kPiPrecision)
                                   .div(Interval::from_long(k, kPiPrecision).sqrt_()))
                          .add(Interval::from_rational(Rational(4, k), kPiPrecision));
    // sqrt(k)(1+2/sqrt k)^2 = sqrt(k) (1 + 4/sqrt k + 4/k)
    Interval rhs_factor = Interval::from_long(k, kPiPrecision).sqrt_().mul(factor);
    bool b_ok = le_pi_bound(boost->q_i, 2, Rational(last_core->q_i), BigInt(0), rhs_factor);
    checks.push_back(make_check("cor22.queries", boost->q_i.get_str(),
                                "(pi/2) Q sqrt(k)(1+2/sqrt k)^2", b_ok, pre_ok && guard,
                                guard ? "" : "Q < sqrt(k): no claim"));
    // w' <= (pi/4)(sqrt k + 1)
    Interval wf = Interval::from_long(k, kPiPrecision)
                      .sqrt_()
                      .add(Interval::from_long(1, kPiPrecision));
    bool w_ok = le_pi_bound(boost->w_i, 4, Rational(1), BigInt(0), wf);
    checks.push_back(
        make_check("cor22.rounds", boost->w_i.get_str(), "(pi/4)(sqrt k + 1)", w_ok, true));
  }
}

std::vector<ResourceEstimate> levels_from_plan(const constructions::PipelinePlan& plan) {
  std::vector<ResourceEstimate> out;
  out.reserve(plan.levels.size());
  for (const auto& lvl : plan.levels) {
    ResourceEstimate est;
    est.level = lvl.level;
    est.is_boost = lvl.is_boost;
    est.n_i = lvl.n_bits;
    est.w_i = lvl.amp.w;
    est.q_i = lvl.amp.queries_out;
    est.e_i = lvl.amp.gates_out;
    est.pre = lvl.pre;
    out.push_back(std::move(est));
  }
  return out;
}

}  // namespace

RecursiveEstimate estimate_recursive(const BigInt& n_exponent, long k, int r, bool boost,
                                     bool relaxed) {
  RecursiveEstimate est;
  constructions::PipelinePlan plan =
      constructions::plan_recursive(n_exponent, k, r, boost, relaxed);
  est.schedule.k = k;
  est.schedule.r = r;
  est.schedule.n_seq = plan.n_seq;
  est.schedule.pre = plan.schedule_pre;
  est.levels = levels_from_plan(plan);
  bool pre_ok = plan.combined_pre().all_hold();
  append_level_checks(est.checks, est.levels, k, plan.schedule_pre.all_hold());
  append_final_checks(est.checks, est.levels, k, r, plan.n_seq.front(), pre_ok);
  return est;
}

Grover02Estimate estimate_grover02(const BigInt& n_exponent) {
  Grover02Estimate est{constructions::plan_grover02(n_exponent), {}, {}};
  est.levels = levels_from_plan(est.plan.pipeline);
  bool pre_ok = est.plan.pre.all_hold() && est.plan.pipeline.combined_pre().all_hold();
  append_level_checks(est.checks, est.levels, est.plan.k, est.plan.pre.all_hold());
  // Corollary-level query bound: total <= (pi/4) sqrt(N) (1 + 4/sqrt k)^4.
  const BigInt& total = est.plan.pipeline.queries();
  Interval base = Interval::from_long(1, kPiPrecision)
                      .add(Interval::from_long(4, kPiPrecision)
                               .div(Interval::from_long(est.plan.k, kPiPrecision).sqrt_()));
  Interval pow4 = base.square().square();
  bool ok = le_pi_bound(total, 4, Rational(1), n_exponent, pow4);
  est.checks.push_back(make_check("cor32.queries", total.get_str(),
                                  "(pi/4) sqrt(N) (1+4/sqrt k)^4", ok, pre_ok));
  return est;
}

MainEstimate estimate_main_fixed_r(const BigInt& n_exponent, int r, bool relaxed,
                                   long k_override) {
  MainEstimate est{constructions::plan_main_fixed_r(n_exponent, r, relaxed, k_override),
                   {},
                   {}};
  long k = est.plan.kchoice.k.get_si();
  if (est.plan.pipeline) {
    est.levels = levels_from_plan(*est.plan.pipeline);
    bool pre_ok = est.plan.pre.all_hold() && est.plan.pipeline->combined_pre().all_hold();
    append_level_checks(est.checks, est.levels, k, est.plan.schedule.pre.all_hold());
    append_final_checks(est.checks, est.levels, k, r, est.plan.schedule.n_seq.front(),
                        pre_ok && est.plan.schedule.pre.all_hold());
    // Corollary: boosted total <= (pi/4) sqrt(N) (1 + 4/sqrt k)^{r+2}.
    Interval base = Interval::from_long(1, kPiPrecision)
                        .add(Interval::from_long(4, kPiPrecision)
                                 .div(Interval::from_long(k, kPiPrecision).sqrt_()));
    Interval factor = base;
    for (int i = 1; i < r + 2; ++i) factor = factor.mul(base);
    bool ok = le_pi_bound(est.plan.pipeline->queries(), 4, Rational(1), n_exponent, factor);
    est.checks.push_back(make_check("cor34.queries", est.plan.pipeline->queries().get_str(),
                                    "(pi/4) sqrt(N)(1+4/sqrt k)^{r+2}", ok, pre_ok));
  }
  return est;
}

MainEstimate estimate_main_eps(const BigInt& n_exponent, const Rational& eps, bool relaxed) {
  MainEstimate est{constructions::plan_main_eps(n_exponent, eps, relaxed), {}, {}};
  long k = est.plan.kchoice.k.get_si();
  long m = est.plan.kchoice.m;
  // (1 + 4/sqrt k)^{r+2} <= 1 + eps by the construction of c2; sqrt k = m
  // exactly, so the whole check is rational.
  if (m > 0) {
    Rational lhs = rational_pow(Rational(m + 4, m), static_cast<unsigned long>(est.plan.r + 2));
    bool ok = lhs <= 1 + eps;
    est.checks.push_back(make_check("cor34.eps", q_str(lhs), q_str(1 + eps), ok,
                                    est.plan.pre.all_hold(),
                                    "(1+4/sqrt k)^{r+2} <= 1+eps"));
  }
  if (est.plan.pipeline) {
    est.levels = levels_from_plan(*est.plan.pipeline);
    bool pre_ok = est.plan.pre.all_hold() && est.plan.pipeline->combined_pre().all_hold();
    append_level_checks(est.checks, est.levels, k, est.plan.schedule.pre.all_hold());
    append_final_checks(est.checks, est.levels, k, static_cast<int>(est.plan.r),
                        est.plan.schedule.n_seq.front(),
                        pre_ok && est.plan.schedule.pre.all_hold());
  }
  return est;
}

std::vector<BoundCheck> check_bounds(const std::string& kind, const BoundInstance& inst) {
  std::vector<BoundCheck> out;
  if (kind == "thm21") {
    bool w_pos = inst.w >= 1;
    BigInt rhs = inst.w * (4 * inst.n_tot + 2 * inst.e_in + 8) + inst.e_in;
    out.push_back(make_check("thm21.gates", inst.e_out.get_str(), rhs.get_str(),
                             inst.e_out <= rhs, w_pos,
                             w_pos ? "" : "w = 0: bound not claimed"));
    BigInt q_rhs = (2 * inst.w + 1) * inst.q_in + inst.w;
    out.push_back(make_check("thm21.queries", inst.q_out.get_str(), q_rhs.get_str(),
                             inst.q_out == q_rhs, true, "(2w+1)Q + w, exact"));
  } else if (kind == "cor22") {
    bool guard = inst.q_in * inst.q_in >= inst.k;
    Interval factor = Interval::from_long(inst.k, kPiPrecision)
                          .sqrt_()
                          .add(Interval::from_long(4, kPiPrecision))
                          .add(Interval::from_long(4, kPiPrecision).div(
                              Interval::from_long(inst.k, kPiPrecision).sqrt_()));
    bool ok = le_pi_bound(inst.q_out, 2, Rational(inst.q_in), BigInt(0), factor);
    out.push_back(make_check("cor22.queries", inst.q_out.get_str(),
                             "(pi/2) Q sqrt(k)(1+2/sqrt k)^2", ok, guard,
                             guard ? "" : "Q < sqrt(k): no claim"));
  } else if (kind == "thm31") {
    bool pre = inst.k >= 4 && inst.n >= inst.m + 2 * ceil_log2(BigInt(inst.k)) &&
               inst.q_in >= inst.k + 2;
    BigInt gap = inst.n - inst.m;
    bool q_ok = le_coef_sqrt_pow2(Rational(inst.q_out),
                                  Rational(inst.q_in) * Rational(inst.k + 4, inst.k), gap);
    out.push_back(make_check("thm31.queries", inst.q_out.get_str(),
                             "Q sqrt(N/M)(1+4/k)", q_ok, pre));
    bool e_low = ge_coef_sqrt_pow2(Rational(inst.e_out), Rational(inst.e_in), gap);
    out.push_back(make_check("thm31.gates_lower", inst.e_out.get_str(), "E sqrt(N/M)",
                             e_low, pre));
    bool e_up = le_coef_sqrt_pow2(
        Rational(inst.e_out),
        (3 * Rational(inst.n) + inst.e_in) * Rational(inst.k + 3, inst.k), gap);
    out.push_back(make_check("thm31.gates_upper", inst.e_out.get_str(),
                             "(3n+E) sqrt(N/M)(1+3/k)", e_up, pre));
  } else if (kind == "cor32") {
    Interval base = Interval::from_long(1, kPiPrecision)
                        .add(Interval::from_long(4, kPiPrecision)
                                 .div(Interval::from_long(inst.k, kPiPrecision).sqrt_()));
    bool ok = le_pi_bound(inst.q_out, 4, Rational(1), inst.n, base.square().square());
    out.push_back(make_check("cor32.queries", inst.q_out.get_str(),
                             "(pi/4) sqrt(N)(1+4/sqrt k)^4", ok, true));
  } else if (kind == "thm33") {
    bool q_ok = Rational(inst.q_out) * inst.q_out * 4 * inst.k <=
                Rational(materialize_pow2(inst.n)) *
                    rational_pow(Rational(inst.k + 4, inst.k),
                                 2 * static_cast<unsigned long>(inst.r));
    out.push_back(
        make_check("thm33.queries", inst.q_out.get_str(), "sqrt(N/4k)(1+4/k)^r", q_ok, true));
    Rational ecoef = 4 *
                     rational_pow(Rational(inst.k + 6, inst.k),
                                  static_cast<unsigned long>(2 * inst.r - 1)) *
                     Rational(inst.n1);
    bool e_ok = Rational(inst.e_out) * inst.e_out * inst.k <=
                Rational(materialize_pow2(inst.n)) * ecoef * ecoef;
    out.push_back(make_check("thm33.gates", inst.e_out.get_str(),
                             "4 sqrt(N/k)(1+6/k)^{2r-1} n_1", e_ok, true));
  } else if (kind == "cor34") {
    long m = 1;
    while (BigInt(m) * m < inst.k) m *= 2;
    bool k_square = BigInt(m) * m == inst.k;
    Rational lhs = rational_pow(Rational(m + 4, m), static_cast<unsigned long>(inst.r) + 2);
    out.push_back(make_check("cor34.eps", q_str(lhs), q_str(1 + inst.eps),
                             lhs <= 1 + inst.eps, k_square,
                             "(1+4/sqrt k)^{r+2} <= 1+eps"));
  } else {
    throw ConfigError("check_bounds: unknown kind \"" + kind + "\"");
  }
  return out;
}

std::string to_tsv(const std::vector<ResourceEstimate>& levels,
                   const std::vector<BoundCheck>& checks) {
  std::ostringstream out;
  out << "level\tn_i\tQ_i\tE_i\tbound\tholds\tpreconditions\n";
  for (const auto& lvl : levels) {
    out << (lvl.is_boost ? "boost" : std::to_string(lvl.level)) << '\t' << lvl.n_i.get_str()
        << '\t' << lvl.q_i.get_str() << '\t' << lvl.e_i.get_str() << "\t-\t-\t"
        << (lvl.pre.all_hold() ? "ok" : lvl.pre.failing_summary()) << '\n';
  }
  for (const auto& c : checks) {
    out << "-\t-\t-\t-\t" << c.name << '\t' << (c.holds ? "true" : "false") << '\t'
        << (c.preconditions ? "ok" : "unmet") << '\n';
  }
  return out.str();
}

std::string to_json(const std::vector<ResourceEstimate>& levels,
                    const std::vector<BoundCheck>& checks) {
  nlohmann::ordered_json doc;
  doc["levels"] = nlohmann::ordered_json::array();
  for (const auto& lvl : levels) {
    nlohmann::ordered_json row;
    row["level"] = lvl.is_boost ? "boost" : std::to_string(lvl.level);
    row["n_i"] = lvl.n_i.get_str();
    row["Q_i"] = lvl.q_i.get_str();
    row["E_i"] = lvl.e_i.get_str();
    row["preconditions"] = lvl.pre.all_hold() ? "ok" : lvl.pre.failing_summary();
    doc["levels"].push_back(row);
  }
  doc["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    nlohmann::ordered_json row;
    row["bound"] = c.name;
    row["lhs"] = c.lhs;
    row["rhs"] = c.rhs;
    row["holds"] = c.holds;
    row["preconditions"] = c.preconditions ? "ok" : "unmet";
    if (!c.note.empty()) row["note"] = c.note;
    doc["checks"].push_back(row);
  }
  return doc.dump(2) + "\n";
}

}  // namespace qsearch::estimator
