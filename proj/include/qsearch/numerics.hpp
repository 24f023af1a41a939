#pragma once

#include <optional>
#include <string>

#include "qsearch/bigint.hpp"
#include "qsearch/errors.hpp"
#include "qsearch/real.hpp"

namespace qsearch::numerics {

/// A probability tracked exactly: either a known rational value or a
/// certified enclosure produced by interval arithmetic.
struct Prob {
  std::optional<Rational> exact;
  Interval enc;

  Prob() : enc(64) {}
  static Prob from_rational(const Rational& q, mpfr_prec_t prec);
  static Prob from_interval(Interval iv);
  /// Enclosure at the requested precision (regenerated from the rational
  /// when the value is exact, so precision can grow).
  Interval at(mpfr_prec_t prec) const;
  double approx() const { return enc.mid(); }
};

/// Number of amplitude-amplification rounds that land exactly on a_prime:
///   w = ceil( arcsin(sqrt a') / (2 arcsin(sqrt a)) - 1/2 ).
/// The returned integer is certified: precision escalates until the
/// enclosure pins the ceiling, and exact integer boundary cases are settled
/// by a Chebyshev-polynomial identity over the rationals.
BigInt compute_w(const Rational& a, const Rational& a_prime);

struct WOutcome {
  BigInt w;
  /// True when (2w+1) arcsin(sqrt a) == arcsin(sqrt a') exactly, i.e. the
  /// lowered probability a~ equals a and the rotation R is the identity.
  bool exact_tie;
};
WOutcome compute_w_rational(const Rational& a, const Rational& a_prime);

/// Interval-input variant used inside recursion chains. Returns nothing if
/// the enclosure of a is too wide to certify the ceiling; the caller then
/// recomputes the whole chain at a higher precision.
std::optional<BigInt> compute_w_interval(const Interval& a, const Rational& a_prime);

struct AmplificationSchedule {
  Rational a;
  Rational a_prime;
  BigInt w;
  Interval theta{64};    // arcsin(sqrt a') / (2w+1)
  Interval a_tilde{64};  // sin^2(theta)
  bool a_tilde_equals_a = false;
  double theta_d() const { return theta.mid(); }
  double a_tilde_d() const { return a_tilde.mid(); }
};
AmplificationSchedule amplification_schedule(const Rational& a, const Rational& a_prime,
                                             mpfr_prec_t prec = 192);

enum class LogStarInput { value, exponent };

/// log* N: iterated binary logarithms until the value drops to <= 1.
/// Accepts N itself or its exponent n (N = 2^n), both exact at any scale.
long log_star(const BigInt& v, LogStarInput kind);

/// s-fold binary logarithm; domain error if the chain hits a nonpositive
/// value before s applications.
double iterated_log(const BigInt& v, LogStarInput kind, long s);

struct FactCeilingResult {
  BigInt lhs;
  Rational rhs;
  bool holds;
};
/// ceil((alpha/2)(1 + 1/k) - 1/2) <= (alpha/2)(1 + 2/k) for k >= 2, alpha >= k.
FactCeilingResult check_fact_ceiling(long k, const Rational& alpha);

struct FactIterlogResult {
  double lhs;
  BigInt rhs;
  bool holds;
};
/// (2i+8) log k < k^(i+1) for k >= 3, i >= 2.
FactIterlogResult check_fact_iterlog(long k, long i);

struct KChoice {
  BigInt k;    // m^2, a power of 2
  long m;      // the chosen power of 2
  Rational c;  // c1 = m / log* N   or   c2 = m / (log* N + 2)
};

/// k = (c1 log* N)^2 with the smallest c1 in [1,2] making k a power of 2.
/// The formula variant takes log* N directly and skips the k <= log log N
/// feasibility check, which only astronomically large N can satisfy.
KChoice pick_k_fixed_r_formula(long log_star_n);
KChoice pick_k_fixed_r(const BigInt& n_exponent);

/// k = (c2 (log* N + 2))^2 with c2 the smallest value >= 4/ln(1+eps)
/// making k a power of 2.
KChoice pick_k_eps_formula(long log_star_n, const Rational& eps);
KChoice pick_k_eps(const BigInt& n_exponent, const Rational& eps);

/// ceil( sqrt(2^n) (1+1/k) / (2 sqrt k) - 1/2 ): the closed-form upper
/// bound on w for a = 2^-n, a' = 1/k. Exact (perfect-square fast path,
/// certified enclosure otherwise).
BigInt paper_w_bound_ceiling(long n, long k);

/// "3/4", "0.25", "7", "2^-20" -> exact rational.
Rational parse_rational(const std::string& text);

}  // namespace qsearch::numerics
