#include "qsearch/real.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <utility>

namespace qsearch {

Interval::Interval(mpfr_prec_t prec) : prec_(prec) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
  mpfr_set_nan(lo_);
  mpfr_set_nan(hi_);
}

Interval::Interval(const Interval& other) : prec_(other.prec_) {
  mpfr_init2(lo_, prec_);
  mpfr_init2(hi_, prec_);
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& other) noexcept : prec_(other.prec_) {
  mpfr_init2(lo_, 2);
  mpfr_init2(hi_, 2);
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
}

Interval& Interval::operator=(const Interval& other) {
  if (this != &other) {
    mpfr_set_prec(lo_, other.prec_);
    mpfr_set_prec(hi_, other.prec_);
    prec_ = other.prec_;
    mpfr_set(lo_, other.lo_, MPFR_RNDD);
    mpfr_set(hi_, other.hi_, MPFR_RNDU);
  }
  return *this;
}

Interval& Interval::operator=(Interval&& other) noexcept {
  if (this != &other) {
    std::swap(prec_, other.prec_);
    mpfr_swap(lo_, other.lo_);
    mpfr_swap(hi_, other.hi_);
  }
  return *this;
}

Interval::~Interval() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

Interval Interval::from_rational(const Rational& q, mpfr_prec_t prec) {
  Interval r(prec);
  mpfr_set_q(r.lo_, q.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.hi_, q.get_mpq_t(), MPFR_RNDU);
  return r;
}

Interval Interval::from_bigint(const BigInt& v, mpfr_prec_t prec) {
  Interval r(prec);
  mpfr_set_z(r.lo_, v.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(r.hi_, v.get_mpz_t(), MPFR_RNDU);
  return r;
}

Interval Interval::from_long(long v, mpfr_prec_t prec) {
  Interval r(prec);
  mpfr_set_si(r.lo_, v, MPFR_RNDD);
  mpfr_set_si(r.hi_, v, MPFR_RNDU);
  return r;
}

Interval Interval::from_double(double v, mpfr_prec_t prec) {
  Interval r(prec);
  mpfr_set_d(r.lo_, v, MPFR_RNDD);
  mpfr_set_d(r.hi_, v, MPFR_RNDU);
  return r;
}

Interval Interval::exact_pow2(long e, mpfr_prec_t prec) {
  Interval r(prec);
  mpfr_set_ui(r.lo_, 1, MPFR_RNDD);
  mpfr_set_ui(r.hi_, 1, MPFR_RNDU);
  mpfr_mul_2si(r.lo_, r.lo_, e, MPFR_RNDD);
  mpfr_mul_2si(r.hi_, r.hi_, e, MPFR_RNDU);
  return r;
}

Interval Interval::pi(mpfr_prec_t prec) {
  Interval r(prec);
  mpfr_const_pi(r.lo_, MPFR_RNDD);
  mpfr_const_pi(r.hi_, MPFR_RNDU);
  return r;
}

Interval Interval::rounded_to(mpfr_prec_t prec) const {
  Interval r(prec);
  mpfr_set(r.lo_, lo_, MPFR_RNDD);
  mpfr_set(r.hi_, hi_, MPFR_RNDU);
  return r;
}

Interval Interval::add(const Interval& o) const {
  Interval r(prec_);
  mpfr_add(r.lo_, lo_, o.lo_, MPFR_RNDD);
  mpfr_add(r.hi_, hi_, o.hi_, MPFR_RNDU);
  return r;
}

Interval Interval::sub(const Interval& o) const {
  Interval r(prec_);
  mpfr_sub(r.lo_, lo_, o.hi_, MPFR_RNDD);
  mpfr_sub(r.hi_, hi_, o.lo_, MPFR_RNDU);
  return r;
}

Interval Interval::mul(const Interval& o) const {
  // General sign handling: min/max over the four endpoint products.
  Interval r(prec_);
  mpfr_t t;
  mpfr_init2(t, prec_);
  mpfr_mul(r.lo_, lo_, o.lo_, MPFR_RNDD);
  mpfr_mul(t, lo_, o.hi_, MPFR_RNDD);
  mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
  mpfr_mul(t, hi_, o.lo_, MPFR_RNDD);
  mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
  mpfr_mul(t, hi_, o.hi_, MPFR_RNDD);
  mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);

  mpfr_mul(r.hi_, lo_, o.lo_, MPFR_RNDU);
  mpfr_mul(t, lo_, o.hi_, MPFR_RNDU);
  mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
  mpfr_mul(t, hi_, o.lo_, MPFR_RNDU);
  mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
  mpfr_mul(t, hi_, o.hi_, MPFR_RNDU);
  mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
  mpfr_clear(t);
  return r;
}

Interval Interval::div(const Interval& o) const {
  if (mpfr_sgn(o.lo_) <= 0 && mpfr_sgn(o.hi_) >= 0)
    throw DomainError("Interval::div: divisor straddles zero");
  Interval r(prec_);
  mpfr_t t;
  mpfr_init2(t, prec_);
  mpfr_div(r.lo_, lo_, o.lo_, MPFR_RNDD);
  mpfr_div(t, lo_, o.hi_, MPFR_RNDD);
  mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
  mpfr_div(t, hi_, o.lo_, MPFR_RNDD);
  mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
  mpfr_div(t, hi_, o.hi_, MPFR_RNDD);
  mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);

  mpfr_div(r.hi_, lo_, o.lo_, MPFR_RNDU);
  mpfr_div(t, lo_, o.hi_, MPFR_RNDU);
  mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
  mpfr_div(t, hi_, o.lo_, MPFR_RNDU);
  mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
  mpfr_div(t, hi_, o.hi_, MPFR_RNDU);
  mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
  mpfr_clear(t);
  return r;
}

Interval Interval::neg() const {
  Interval r(prec_);
  mpfr_neg(r.lo_, hi_, MPFR_RNDD);
  mpfr_neg(r.hi_, lo_, MPFR_RNDU);
  return r;
}

Interval Interval::mul_pow2(long e) const {
  Interval r(prec_);
  mpfr_mul_2si(r.lo_, lo_, e, MPFR_RNDD);
  mpfr_mul_2si(r.hi_, hi_, e, MPFR_RNDU);
  return r;
}

Interval Interval::div_bigint(const BigInt& v) const {
  if (v <= 0) throw DomainError("Interval::div_bigint: divisor must be > 0");
  Interval r(prec_);
  mpfr_div_z(r.lo_, lo_, v.get_mpz_t(), MPFR_RNDD);
  mpfr_div_z(r.hi_, hi_, v.get_mpz_t(), MPFR_RNDU);
  return r;
}

Interval Interval::mul_bigint(const BigInt& v) const {
  if (v < 0) return mul(from_bigint(v, prec_));
  Interval r(prec_);
  mpfr_mul_z(r.lo_, lo_, v.get_mpz_t(), MPFR_RNDD);
  mpfr_mul_z(r.hi_, hi_, v.get_mpz_t(), MPFR_RNDU);
  return r;
}

Interval Interval::sqrt_() const {
  if (mpfr_sgn(lo_) < 0) throw DomainError("Interval::sqrt_: negative argument");
  Interval r(prec_);
  mpfr_sqrt(r.lo_, lo_, MPFR_RNDD);
  mpfr_sqrt(r.hi_, hi_, MPFR_RNDU);
  return r;
}

Interval Interval::square() const {
  if (mpfr_sgn(lo_) < 0) throw DomainError("Interval::square: negative argument");
  Interval r(prec_);
  mpfr_sqr(r.lo_, lo_, MPFR_RNDD);
  mpfr_sqr(r.hi_, hi_, MPFR_RNDU);
  return r;
}

// Taylor enclosure of asin for small x: asin(x) = sum c_j x^(2j+1) with
// c_j = C(2j,j) / (4^j (2j+1)) <= 1, so the tail after term J is at most
// x^(2J+3) / (1 - x^2) <= 2 x^(2J+3) for x <= 1/2. The truncated sum is a
// strict lower bound (all terms positive).
Interval Interval::asin_small_series() const {
  Interval r(prec_);
  mpfr_t x2lo, x2hi, tlo, thi, tmp;
  mpfr_init2(x2lo, prec_);
  mpfr_init2(x2hi, prec_);
  mpfr_init2(tlo, prec_);
  mpfr_init2(thi, prec_);
  mpfr_init2(tmp, prec_);

  mpfr_sqr(x2lo, lo_, MPFR_RNDD);
  mpfr_sqr(x2hi, hi_, MPFR_RNDU);
  mpfr_set(tlo, lo_, MPFR_RNDD);  // running term, lower series
  mpfr_set(thi, hi_, MPFR_RNDU);  // running term, upper series
  mpfr_set(r.lo_, lo_, MPFR_RNDD);
  mpfr_set(r.hi_, hi_, MPFR_RNDU);

  mpfr_exp_t target = mpfr_get_exp(hi_) - prec_ - 8;
  for (unsigned long j = 0;; ++j) {
    // term_{j+1} = term_j * x^2 * (2j+1)^2 / ((2j+2)(2j+3))
    unsigned long num = (2 * j + 1) * (2 * j + 1);
    unsigned long den = (2 * j + 2) * (2 * j + 3);
    mpfr_mul(tlo, tlo, x2lo, MPFR_RNDD);
    mpfr_mul_ui(tlo, tlo, num, MPFR_RNDD);
    mpfr_div_ui(tlo, tlo, den, MPFR_RNDD);
    mpfr_mul(thi, thi, x2hi, MPFR_RNDU);
    mpfr_mul_ui(thi, thi, num, MPFR_RNDU);
    mpfr_div_ui(thi, thi, den, MPFR_RNDU);
    mpfr_add(r.lo_, r.lo_, tlo, MPFR_RNDD);
    mpfr_add(r.hi_, r.hi_, thi, MPFR_RNDU);
    if (mpfr_zero_p(thi) || mpfr_get_exp(thi) < target || j > 4096) {
      // Tail bound: next term is below thi * x^2; the full tail below
      // 2 * thi * x^2 since x <= 1/2.
      mpfr_mul(tmp, thi, x2hi, MPFR_RNDU);
      mpfr_mul_2ui(tmp, tmp, 1, MPFR_RNDU);
      mpfr_add(r.hi_, r.hi_, tmp, MPFR_RNDU);
      break;
    }
  }
  mpfr_clear(x2lo);
  mpfr_clear(x2hi);
  mpfr_clear(tlo);
  mpfr_clear(thi);
  mpfr_clear(tmp);
  return r;
}

Interval Interval::asin_() const {
  if (mpfr_sgn(lo_) < 0) throw DomainError("Interval::asin_: negative argument");
  if (mpfr_cmp_ui(hi_, 1) > 0) throw DomainError("Interval::asin_: argument above 1");
  if (mpfr_zero_p(hi_)) return *this;
  // When the argument is tiny relative to the precision, the series needs
  // only a handful of terms; mpfr_asin would be much slower there.
  mpfr_exp_t e = mpfr_get_exp(hi_);
  if (e < 0 && static_cast<mpfr_prec_t>(-e) * 16 > prec_) return asin_small_series();
  Interval r(prec_);
  mpfr_asin(r.lo_, lo_, MPFR_RNDD);
  mpfr_asin(r.hi_, hi_, MPFR_RNDU);
  return r;
}

Interval Interval::sin_() const {
  // Monotone on [0, pi/2]; callers only pass angles in that range.
  Interval r(prec_);
  mpfr_sin(r.lo_, lo_, MPFR_RNDD);
  mpfr_sin(r.hi_, hi_, MPFR_RNDU);
  return r;
}

Interval Interval::log2_() const {
  if (mpfr_sgn(lo_) <= 0) throw DomainError("Interval::log2_: nonpositive argument");
  Interval r(prec_);
  mpfr_log2(r.lo_, lo_, MPFR_RNDD);
  mpfr_log2(r.hi_, hi_, MPFR_RNDU);
  return r;
}

Interval Interval::log1p_() const {
  if (mpfr_cmp_si(lo_, -1) <= 0) throw DomainError("Interval::log1p_: argument <= -1");
  Interval r(prec_);
  mpfr_log1p(r.lo_, lo_, MPFR_RNDD);
  mpfr_log1p(r.hi_, hi_, MPFR_RNDU);
  return r;
}

bool Interval::is_nonnegative() const { return mpfr_sgn(lo_) >= 0; }

bool Interval::certainly_lt(const Interval& o) const { return mpfr_cmp(hi_, o.lo_) < 0; }
bool Interval::certainly_le(const Interval& o) const { return mpfr_cmp(hi_, o.lo_) <= 0; }

bool Interval::certainly_lt_q(const Rational& q) const {
  return mpfr_cmp_q(hi_, q.get_mpq_t()) < 0;
}
bool Interval::certainly_le_q(const Rational& q) const {
  return mpfr_cmp_q(hi_, q.get_mpq_t()) <= 0;
}
bool Interval::certainly_gt_q(const Rational& q) const {
  return mpfr_cmp_q(lo_, q.get_mpq_t()) > 0;
}
bool Interval::certainly_ge_q(const Rational& q) const {
  return mpfr_cmp_q(lo_, q.get_mpq_t()) >= 0;
}
bool Interval::contains_q(const Rational& q) const {
  return mpfr_cmp_q(lo_, q.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, q.get_mpq_t()) >= 0;
}

Interval::CeilResult Interval::certified_ceil() const {
  CeilResult res{CeilResult::Kind::wide, BigInt(0), BigInt(0)};
  if (mpfr_nan_p(lo_) || mpfr_nan_p(hi_)) return res;
  BigInt clo, chi;
  mpfr_get_z(clo.get_mpz_t(), lo_, MPFR_RNDU);  // exact ceil(lo)
  mpfr_get_z(chi.get_mpz_t(), hi_, MPFR_RNDU);  // exact ceil(hi)
  if (clo == chi) {
    res.kind = CeilResult::Kind::certified;
    res.value = clo;
  } else if (chi == clo + 1) {
    // One integer inside the enclosure: the ceiling is clo if the true
    // value is <= clo, else clo + 1. Only an exact tie test can settle it.
    res.kind = CeilResult::Kind::straddle;
    res.candidate = clo;
  }
  return res;
}

double Interval::mid() const {
  mpfr_t m;
  mpfr_init2(m, prec_);
  mpfr_add(m, lo_, hi_, MPFR_RNDN);
  mpfr_div_2ui(m, m, 1, MPFR_RNDN);
  double d = mpfr_get_d(m, MPFR_RNDN);
  mpfr_clear(m);
  return d;
}

double Interval::width() const {
  mpfr_t w;
  mpfr_init2(w, 64);
  mpfr_sub(w, hi_, lo_, MPFR_RNDU);
  double d = mpfr_get_d(w, MPFR_RNDU);
  mpfr_clear(w);
  return d;
}

std::string Interval::decimal(int significant_digits) const {
  mpfr_t m;
  mpfr_init2(m, prec_);
  mpfr_add(m, lo_, hi_, MPFR_RNDN);
  mpfr_div_2ui(m, m, 1, MPFR_RNDN);
  char* s = nullptr;
  mpfr_asprintf(&s, "%.*Rg", significant_digits, m);
  std::string out(s);
  mpfr_free_str(s);
  mpfr_clear(m);
  return out;
}

long Interval::lo_exponent() const {
  if (mpfr_zero_p(lo_) || mpfr_nan_p(lo_)) return 0;
  return static_cast<long>(mpfr_get_exp(lo_));
}

const Interval& cached_asin_sqrt(const Rational& q, mpfr_prec_t prec) {
  static std::mutex mu;
  static std::map<std::pair<std::string, mpfr_prec_t>, Interval> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(q.get_str(), prec);
  auto it = cache.find(key);
  if (it == cache.end()) {
    Interval v = Interval::from_rational(q, prec).sqrt_().asin_();
    it = cache.emplace(key, std::move(v)).first;
  }
  return it->second;
}

}  // namespace qsearch
