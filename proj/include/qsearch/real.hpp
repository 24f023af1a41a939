#pragma once

#include <mpfr.h>

#include <optional>
#include <string>

#include "qsearch/bigint.hpp"
#include "qsearch/errors.hpp"

namespace qsearch {

/// Closed interval [lo, hi] of mpfr values, outward-rounded at a fixed
/// working precision. Every operation returns an enclosure of the true
/// image, which is what lets ceilings and comparisons be certified.
class Interval {
 public:
  explicit Interval(mpfr_prec_t prec);
  Interval(const Interval& other);
  Interval(Interval&& other) noexcept;
  Interval& operator=(const Interval& other);
  Interval& operator=(Interval&& other) noexcept;
  ~Interval();

  static Interval from_rational(const Rational& q, mpfr_prec_t prec);
  static Interval from_bigint(const BigInt& v, mpfr_prec_t prec);
  static Interval from_long(long v, mpfr_prec_t prec);
  static Interval from_double(double v, mpfr_prec_t prec);
  /// Exact point interval 2^e.
  static Interval exact_pow2(long e, mpfr_prec_t prec);
  static Interval pi(mpfr_prec_t prec);

  mpfr_prec_t precision() const { return prec_; }
  mpfr_srcptr lo() const { return lo_; }
  mpfr_srcptr hi() const { return hi_; }

  /// Same value, re-enclosed at a (typically lower) precision.
  Interval rounded_to(mpfr_prec_t prec) const;

  Interval add(const Interval& o) const;
  Interval sub(const Interval& o) const;
  Interval mul(const Interval& o) const;
  Interval div(const Interval& o) const;  // o must not straddle 0
  Interval neg() const;
  Interval mul_pow2(long e) const;
  Interval div_bigint(const BigInt& v) const;  // v > 0
  Interval mul_bigint(const BigInt& v) const;

  Interval sqrt_() const;   // requires lo >= 0
  Interval square() const;  // requires lo >= 0
  /// arcsin on [0, 1]; uses a certified Taylor enclosure for tiny arguments.
  Interval asin_() const;
  /// sin, valid on [0, pi/2] where it is monotone.
  Interval sin_() const;
  Interval log2_() const;   // requires lo > 0
  Interval log1p_() const;  // requires lo > -1

  bool is_nonnegative() const;
  bool certainly_lt(const Interval& o) const;  // hi <  o.lo
  bool certainly_le(const Interval& o) const;  // hi <= o.lo
  bool certainly_lt_q(const Rational& q) const;
  bool certainly_le_q(const Rational& q) const;
  bool certainly_gt_q(const Rational& q) const;
  bool certainly_ge_q(const Rational& q) const;
  bool contains_q(const Rational& q) const;

  struct CeilResult {
    enum class Kind { certified, straddle, wide } kind;
    BigInt value;      // valid when certified
    BigInt candidate;  // the straddled integer when kind == straddle
  };
  /// Exact ceiling of the enclosed value, when the enclosure pins it down.
  CeilResult certified_ceil() const;

  /// Midpoint as binary64 (may over/underflow for extreme exponents).
  double mid() const;
  /// Upper bound on hi - lo as binary64 (inf if not representable).
  double width() const;
  /// Decimal rendering of the midpoint with the given significant digits.
  std::string decimal(int significant_digits) const;
  /// log2 of the magnitude of lo (for precision estimates); 0 for zero.
  long lo_exponent() const;

 private:
  mpfr_prec_t prec_;
  mpfr_t lo_;
  mpfr_t hi_;

  Interval asin_small_series() const;
};

/// arcsin(sqrt(q)) for rational q in (0, 1]; memoized per (q, prec) since
/// the recursion re-evaluates it at high precision for every level.
const Interval& cached_asin_sqrt(const Rational& q, mpfr_prec_t prec);

}  // namespace qsearch
