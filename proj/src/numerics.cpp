#include "qsearch/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qsearch::numerics {

namespace {

constexpr mpfr_prec_t kPrecCap = mpfr_prec_t(1) << 23;

void validate_a_pair(const Rational& a, const Rational& a_prime) {
  if (a <= 0) throw DomainError("compute_w: a must be positive");
  if (a_prime > 1) throw DomainError("compute_w: a' must be at most 1");
  if (a > a_prime) throw DomainError("compute_w: a must not exceed a'");
}

// Exact tie test: does asin(sqrt a') == (2m+1) asin(sqrt a) hold exactly?
// Writing T_n for the Chebyshev polynomial of the first kind,
//   sin((2m+1) t) = (-1)^m T_{2m+1}(sin t),
// and T_n(sqrt a) = e_n + o_n sqrt(a) with rational e_n, o_n obeying
//   T_{n+1} = (2a o_n - e_{n-1},  2 e_n - o_{n-1}).
// The tie holds iff o^2 a == a'. Callers invoke this only when the
// enclosure already pins the ratio next to m, so the angle cannot have
// wrapped past pi/2.
bool chebyshev_tie(const Rational& a, const Rational& a_prime, const BigInt& m) {
  if (m < 0 || m > 4096) return false;  // ties at astronomical w do not occur for our inputs
  unsigned long n_target = 2 * m.get_ui() + 1;
  Rational e_prev(1), o_prev(0);  // T_0
  Rational e_cur(0), o_cur(1);    // T_1
  for (unsigned long n = 1; n < n_target; ++n) {
    Rational e_next = 2 * a * o_cur - e_prev;
    Rational o_next = 2 * e_cur - o_prev;
    e_prev = e_cur;
    o_prev = o_cur;
    e_cur = e_next;
    o_cur = o_next;
  }
  return o_cur * o_cur * a == a_prime;
}

// y = asin(sqrt a') / (2 asin(sqrt a)) - 1/2 as an enclosure.
Interval pre_ceiling_value(const Interval& a, const Rational& a_prime, mpfr_prec_t prec) {
  Interval num = cached_asin_sqrt(a_prime, prec);
  Interval den = a.rounded_to(prec).sqrt_().asin_().mul_pow2(1);
  return num.div(den).sub(Interval::from_rational(Rational(1, 2), prec));
}

mpfr_prec_t initial_w_precision(const Interval& a) {
  long e = a.lo_exponent();  // a ~ 2^e, X ~ 2^(-e/2)
  long guess = (e < 0 ? -e / 2 : 0) + 192;
  return std::max<mpfr_prec_t>(128, guess);
}

}  // namespace

Prob Prob::from_rational(const Rational& q, mpfr_prec_t prec) {
  Prob p;
  p.exact = q;
  p.enc = Interval::from_rational(q, prec);
  return p;
}

Prob Prob::from_interval(Interval iv) {
  Prob p;
  p.enc = std::move(iv);
  return p;
}

Interval Prob::at(mpfr_prec_t prec) const {
  if (exact) return Interval::from_rational(*exact, prec);
  return enc.rounded_to(prec);
}

WOutcome compute_w_rational(const Rational& a, const Rational& a_prime) {
  validate_a_pair(a, a_prime);
  if (a == a_prime) return {BigInt(0), true};
  bool tie_checked = false;
  for (mpfr_prec_t prec = initial_w_precision(Interval::from_rational(a, 64)); prec <= kPrecCap;
       prec *= 2) {
    Interval y = pre_ceiling_value(Interval::from_rational(a, prec), a_prime, prec);
    auto res = y.certified_ceil();
    if (res.kind == Interval::CeilResult::Kind::certified) return {res.value, false};
    if (res.kind == Interval::CeilResult::Kind::straddle && !tie_checked) {
      tie_checked = true;
      if (chebyshev_tie(a, a_prime, res.candidate)) return {res.candidate, true};
    }
  }
  throw ResourceError("compute_w: ceiling not certifiable within the precision cap");
}

BigInt compute_w(const Rational& a, const Rational& a_prime) {
  return compute_w_rational(a, a_prime).w;
}

std::optional<BigInt> compute_w_interval(const Interval& a, const Rational& a_prime) {
  if (!a.is_nonnegative()) throw DomainError("compute_w: a must be positive");
  if (!a.certainly_le_q(a_prime)) {
    if (a.certainly_gt_q(a_prime)) throw DomainError("compute_w: a must not exceed a'");
    return std::nullopt;  // cannot even certify the precondition yet
  }
  // Raising the working precision beyond the stored width of a buys
  // nothing, so give up there and let the caller rebuild its chain.
  mpfr_prec_t cap = a.precision() + 256;
  mpfr_prec_t prec = std::min(initial_w_precision(a), cap);
  while (true) {
    Interval y = pre_ceiling_value(a, a_prime, prec);
    auto res = y.certified_ceil();
    if (res.kind == Interval::CeilResult::Kind::certified) return res.value;
    if (prec >= cap) return std::nullopt;
    prec = std::min<mpfr_prec_t>(prec * 2, cap);
  }
}

AmplificationSchedule amplification_schedule(const Rational& a, const Rational& a_prime,
                                             mpfr_prec_t prec) {
  AmplificationSchedule s;
  s.a = a;
  s.a_prime = a_prime;
  auto wo = compute_w_rational(a, a_prime);
  s.w = wo.w;
  s.a_tilde_equals_a = wo.exact_tie;
  s.theta = cached_asin_sqrt(a_prime, prec).div_bigint(2 * s.w + 1);
  if (wo.exact_tie) {
    s.a_tilde = Interval::from_rational(a, prec);
  } else {
    s.a_tilde = s.theta.sin_().square();
  }
  return s;
}

long log_star(const BigInt& v, LogStarInput kind) {
  if (kind == LogStarInput::exponent) {
    if (v < 0) throw DomainError("log_star: exponent must be nonnegative");
    if (v == 0) return 0;  // N = 1
    return 1 + log_star(v, LogStarInput::value);
  }
  if (v < 1) throw DomainError("log_star: N must be at least 1");
  // N <= 2^T  <=>  ceil(log2 N) <= T for integer T, so iterating the exact
  // integer ceil(log2 .) counts the same number of steps as the real chain.
  BigInt cur = v;
  long r = 0;
  while (cur > 1) {
    cur = ceil_log2(cur);
    ++r;
  }
  return r;
}

double iterated_log(const BigInt& v, LogStarInput kind, long s) {
  if (s < 0) throw DomainError("iterated_log: s must be nonnegative");
  const mpfr_prec_t prec = 256;
  Interval cur(prec);
  long remaining = s;
  if (kind == LogStarInput::exponent) {
    if (remaining == 0) {
      // N itself; overflows to +inf beyond binary64 range.
      if (v > 1024) return std::numeric_limits<double>::infinity();
      return std::ldexp(1.0, static_cast<int>(v.get_si()));
    }
    cur = Interval::from_bigint(v, prec);
    --remaining;
  } else {
    cur = Interval::from_bigint(v, prec);
  }
  for (; remaining > 0; --remaining) {
    if (!cur.certainly_gt_q(Rational(0)))
      throw DomainError("iterated_log: chain reached a nonpositive value");
    cur = cur.log2_();
  }
  return cur.mid();
}

FactCeilingResult check_fact_ceiling(long k, const Rational& alpha) {
  if (k < 2) throw DomainError("check_fact_ceiling: requires k >= 2");
  if (alpha < k) throw DomainError("check_fact_ceiling: requires alpha >= k");
  FactCeilingResult res;
  Rational kq(k);
  res.lhs = ceil_rational(alpha * (kq + 1) / (2 * kq) - Rational(1, 2));
  res.rhs = alpha * (kq + 2) / (2 * kq);
  res.holds = Rational(res.lhs) <= res.rhs;
  return res;
}

FactIterlogResult check_fact_iterlog(long k, long i) {
  if (k < 3) throw DomainError("check_fact_iterlog: requires k >= 3");
  if (i < 2) throw DomainError("check_fact_iterlog: requires i >= 2");
  FactIterlogResult res;
  res.rhs = bigint_pow(BigInt(k), static_cast<unsigned long>(i) + 1);
  BigInt kz(k);
  if (is_power_of_two(kz)) {
    BigInt lhs_exact = BigInt(2 * i + 8) * exact_log2(kz);
    res.lhs = lhs_exact.get_d();
    res.holds = lhs_exact < res.rhs;
    return res;
  }
  for (mpfr_prec_t prec = 128; prec <= kPrecCap; prec *= 2) {
    Interval lhs = Interval::from_long(k, prec).log2_().mul_bigint(BigInt(2 * i + 8));
    res.lhs = lhs.mid();
    Interval rhs = Interval::from_bigint(res.rhs, prec);
    if (lhs.certainly_lt(rhs)) {
      res.holds = true;
      return res;
    }
    if (rhs.certainly_le(lhs)) {
      res.holds = false;
      return res;
    }
    // log2 k is irrational for non-powers of two, so escalation terminates.
  }
  throw ResourceError("check_fact_iterlog: comparison not certifiable");
}

KChoice pick_k_fixed_r_formula(long log_star_n) {
  if (log_star_n < 1) throw ConfigError("pick_k_fixed_r: log* N must be at least 1");
  long m = 1;
  while (m < log_star_n) m *= 2;  // smallest power of two >= log* N, so c1 = m / log* N in [1, 2)
  KChoice choice;
  choice.m = m;
  choice.k = BigInt(m) * m;
  choice.c = Rational(m, log_star_n);
  choice.c.canonicalize();
  return choice;
}

KChoice pick_k_fixed_r(const BigInt& n_exponent) {
  long lsn = log_star(n_exponent, LogStarInput::exponent);
  KChoice choice = pick_k_fixed_r_formula(lsn);
  // k <= log log N  <=>  k <= floor(log2 n)
  if (choice.k > floor_log2(n_exponent))
    throw ConfigError("pick_k_fixed_r: k = " + choice.k.get_str() +
                      " exceeds log log N; N is too small for this parameter choice");
  return choice;
}

KChoice pick_k_eps_formula(long log_star_n, const Rational& eps) {
  if (eps <= 0) throw DomainError("pick_k_eps: epsilon must be positive");
  long base = log_star_n + 2;
  for (mpfr_prec_t prec = 128; prec <= kPrecCap; prec *= 2) {
    // threshold = (log* N + 2) * 4 / ln(1 + eps)
    Interval threshold = Interval::from_long(4 * base, prec).div(
        Interval::from_rational(eps, prec).log1p_());
    for (long m = 1; m <= (1L << 30); m *= 2) {
      Interval mi = Interval::from_long(m, prec);
      if (threshold.certainly_le(mi)) {
        KChoice choice;
        choice.m = m;
        choice.k = BigInt(m) * m;
        choice.c = Rational(m, base);
        choice.c.canonicalize();
        return choice;
      }
      if (!mi.certainly_lt(threshold)) break;  // undecided: escalate precision
    }
  }
  throw ResourceError("pick_k_eps: threshold comparison not certifiable");
}

KChoice pick_k_eps(const BigInt& n_exponent, const Rational& eps) {
  long lsn = log_star(n_exponent, LogStarInput::exponent);
  KChoice choice = pick_k_eps_formula(lsn, eps);
  if (choice.k > floor_log2(n_exponent))
    throw ConfigError("pick_k_eps: k = " + choice.k.get_str() +
                      " exceeds log log N; N is too small for this epsilon");
  return choice;
}

BigInt paper_w_bound_ceiling(long n, long k) {
  if (n < 1 || k < 2) throw DomainError("paper_w_bound_ceiling: need n >= 1, k >= 2");
  // value = (k+1) sqrt(2^n k) / (2 k^2) - 1/2
  BigInt s = pow2(static_cast<unsigned long>(n)) * k;
  BigInt root;
  if (perfect_square_root(s, root)) {
    Rational v = Rational(root) * (k + 1) / (2 * Rational(k) * k) - Rational(1, 2);
    return ceil_rational(v);
  }
  for (mpfr_prec_t prec = std::max(128L, n / 2 + 128L); prec <= kPrecCap; prec *= 2) {
    Interval v = Interval::from_bigint(s, prec)
                     .sqrt_()
                     .mul_bigint(BigInt(k + 1))
                     .div_bigint(BigInt(2) * k * k)
                     .sub(Interval::from_rational(Rational(1, 2), prec));
    auto res = v.certified_ceil();
    // sqrt(s) is irrational here, so no exact integer boundary exists.
    if (res.kind == Interval::CeilResult::Kind::certified) return res.value;
  }
  throw ResourceError("paper_w_bound_ceiling: not certifiable within the precision cap");
}

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw ConfigError("empty number");
  // 2^-20 / 2^20 shorthand
  if (text.rfind("2^", 0) == 0) {
    long e = std::stol(text.substr(2));
    Rational q(1);
    if (e >= 0) return Rational(pow2(static_cast<unsigned long>(e)));
    return dyadic(static_cast<unsigned long>(-e));
  }
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    Rational q(text.substr(0, slash) + "/" + text.substr(slash + 1));
    q.canonicalize();
    return q;
  }
  auto dot = text.find('.');
  if (dot != std::string::npos) {
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    long frac_len = static_cast<long>(text.size() - dot - 1);
    BigInt num(digits);
    BigInt den = 1;
    for (long i = 0; i < frac_len; ++i) den *= 10;
    Rational q = Rational(num) / Rational(den);
    q.canonicalize();
    return q;
  }
  return Rational(BigInt(text));
}

}  // namespace qsearch::numerics
