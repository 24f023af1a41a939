#pragma once

#include <gmpxx.h>

#include <string>

#include "qsearch/errors.hpp"

namespace qsearch {

// Exact integers and rationals. Counts (queries, gates) are BigInt and are
// never rounded; probabilities that admit an exact representation are
// Rational.
using BigInt = mpz_class;
using Rational = mpq_class;

inline bool is_power_of_two(const BigInt& v) {
  if (v <= 0) return false;
  return mpz_popcount(v.get_mpz_t()) == 1;
}

/// floor(log2 v) for v >= 1.
inline BigInt floor_log2(const BigInt& v) {
  if (v < 1) throw DomainError("floor_log2: argument must be >= 1");
  return BigInt(mpz_sizeinbase(v.get_mpz_t(), 2)) - 1;
}

/// ceil(log2 v) for v >= 1, exact.
inline BigInt ceil_log2(const BigInt& v) {
  if (v < 1) throw DomainError("ceil_log2: argument must be >= 1");
  BigInt f = floor_log2(v);
  if (is_power_of_two(v)) return f;
  return f + 1;
}

/// log2 of an exact power of two.
inline long exact_log2(const BigInt& v) {
  if (!is_power_of_two(v)) throw DomainError("exact_log2: not a power of two");
  return static_cast<long>(mpz_sizeinbase(v.get_mpz_t(), 2)) - 1;
}

inline BigInt pow2(unsigned long e) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, e);
  return r;
}

inline BigInt bigint_pow(const BigInt& base, unsigned long e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

/// Exact square root if v is a perfect square.
inline bool perfect_square_root(const BigInt& v, BigInt& root) {
  if (v < 0) return false;
  if (mpz_perfect_square_p(v.get_mpz_t()) == 0) return false;
  mpz_sqrt(root.get_mpz_t(), v.get_mpz_t());
  return true;
}

/// ceil of an exact rational.
inline BigInt ceil_rational(const Rational& q) {
  BigInt r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

/// 2^-e as an exact rational (e >= 0).
inline Rational dyadic(unsigned long neg_exp) {
  Rational q(1);
  q /= Rational(pow2(neg_exp));
  return q;
}

inline std::string to_string(const BigInt& v) { return v.get_str(); }

}  // namespace qsearch
