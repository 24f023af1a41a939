#include <cmath>

#include "doctest.h"
#include "qsearch/numerics.hpp"

using namespace qsearch;
using namespace qsearch::numerics;

namespace {

// Independent check of the round-count ceiling using plain binary64
// arcsin; only valid away from integer boundaries.
long w_oracle_double(double a, double a_prime) {
  double y = std::asin(std::sqrt(a_prime)) / (2 * std::asin(std::sqrt(a))) - 0.5;
  return static_cast<long>(std::ceil(y));
}

}  // namespace

TEST_SUITE("numerics") {

TEST_CASE("compute_w closed-form and boundary cases") {
  CHECK(compute_w(Rational(1, 4), Rational(1)) == 1);  // arcsin(1)=pi/2, arcsin(1/2)=pi/6
  CHECK(compute_w(Rational(1, 2), Rational(1)) == 1);
  Rational p3(3, 10);
  CHECK(compute_w(p3, p3) == 0);
  // Exact integer boundary settled by the Chebyshev identity:
  // sin(3 arcsin(1/4)) = 11/16, so a' = 121/256 gives exactly one round.
  CHECK(compute_w(Rational(1, 16), Rational(121, 256)) == 1);
  auto wo = compute_w_rational(Rational(1, 16), Rational(121, 256));
  CHECK(wo.exact_tie);
  auto wo2 = compute_w_rational(Rational(1, 2), Rational(1));
  CHECK_FALSE(wo2.exact_tie);
}

TEST_CASE("compute_w at 2^-20 matches the high-precision oracle") {
  CHECK(compute_w(dyadic(20), Rational(1, 4)) == 268);
  CHECK(w_oracle_double(std::ldexp(1.0, -20), 0.25) == 268);
  CHECK(compute_w(dyadic(20), Rational(1, 4)) <= paper_w_bound_ceiling(20, 4));
}

TEST_CASE("compute_w domain errors") {
  CHECK_THROWS_AS(compute_w(Rational(0), Rational(1, 2)), DomainError);
  CHECK_THROWS_AS(compute_w(Rational(-1, 4), Rational(1, 2)), DomainError);
  CHECK_THROWS_AS(compute_w(Rational(1, 2), Rational(3, 2)), DomainError);
  CHECK_THROWS_AS(compute_w(Rational(1, 2), Rational(1, 4)), DomainError);
}

TEST_CASE("compute_w defining ceiling property") {
  for (long n = 1; n <= 24; ++n) {
    for (long k : {2L, 3L, 4L, 8L, 64L}) {
      Rational a = dyadic(static_cast<unsigned long>(n));
      Rational ap(1, k);
      if (a > ap) continue;
      BigInt w = compute_w(a, ap);
      double sa = std::asin(std::sqrt(std::ldexp(1.0, static_cast<int>(-n))));
      double sap = std::asin(std::sqrt(1.0 / static_cast<double>(k)));
      double wd = w.get_d();
      CHECK((2 * wd + 1) * sa >= sap - 1e-9);
      CHECK((2 * wd - 1) * sa < sap + 1e-9);
    }
  }
}

TEST_CASE("amplification_schedule examples") {
  auto s1 = amplification_schedule(Rational(1, 4), Rational(1));
  CHECK(s1.w == 1);
  CHECK(s1.theta_d() == doctest::Approx(M_PI / 6).epsilon(1e-14));
  CHECK(s1.a_tilde_d() == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(s1.a_tilde_equals_a);  // ratio 1: R degenerates to the identity

  auto s2 = amplification_schedule(Rational(1, 2), Rational(1));
  CHECK(s2.w == 1);
  CHECK(s2.theta_d() == doctest::Approx(M_PI / 6).epsilon(1e-14));
  CHECK(s2.a_tilde_d() == doctest::Approx(0.25).epsilon(1e-14));
  CHECK_FALSE(s2.a_tilde_equals_a);  // R maps |0> to sqrt(1/2)|0> + sqrt(1/2)|1>

  Rational p3(3, 10);
  auto s3 = amplification_schedule(p3, p3);
  CHECK(s3.w == 0);
  CHECK(s3.theta_d() == doctest::Approx(std::asin(std::sqrt(0.3))).epsilon(1e-14));
  CHECK(s3.a_tilde_d() == doctest::Approx(0.3).epsilon(1e-14));
}

TEST_CASE("a_tilde never exceeds a") {
  for (long n = 1; n <= 16; ++n) {
    for (long k : {1L, 2L, 4L, 8L}) {
      Rational a = dyadic(static_cast<unsigned long>(n));
      Rational ap(1, k);
      if (a > ap) continue;
      auto s = amplification_schedule(a, ap);
      CHECK(s.a_tilde_d() <= a.get_d() + 1e-12);
    }
  }
}

TEST_CASE("log_star") {
  CHECK(log_star(BigInt(1), LogStarInput::value) == 0);
  CHECK(log_star(BigInt(2), LogStarInput::value) == 1);
  CHECK(log_star(BigInt(16), LogStarInput::value) == 3);
  CHECK(log_star(BigInt(17), LogStarInput::value) == 4);
  CHECK(log_star(BigInt(65536), LogStarInput::value) == 4);
  CHECK(log_star(BigInt(65537), LogStarInput::value) == 5);
  CHECK(log_star(BigInt(1024), LogStarInput::exponent) == 5);  // N = 2^1024
  CHECK(log_star(BigInt(0), LogStarInput::exponent) == 0);     // N = 1
  CHECK(log_star(pow2(64), LogStarInput::exponent) == 6);      // N = 2^(2^64)
  CHECK_THROWS_AS(log_star(BigInt(0), LogStarInput::value), DomainError);
}

TEST_CASE("iterated_log") {
  CHECK(iterated_log(BigInt(65536), LogStarInput::value, 2) == doctest::Approx(4.0));
  CHECK(iterated_log(BigInt(100), LogStarInput::value, 0) == doctest::Approx(100.0));
  CHECK(iterated_log(BigInt(1024), LogStarInput::exponent, 3) ==
        doctest::Approx(std::log2(10.0)).epsilon(1e-12));
  CHECK_THROWS_AS(iterated_log(BigInt(2), LogStarInput::value, 3), DomainError);
}

TEST_CASE("fact: ceiling removal") {
  auto r = check_fact_ceiling(2, Rational(2));
  CHECK(r.lhs == 1);
  CHECK(r.rhs == Rational(2));
  CHECK(r.holds);
  CHECK(check_fact_ceiling(4, Rational(640)).holds);
  CHECK_THROWS_AS(check_fact_ceiling(2, Rational(1)), DomainError);
  CHECK_THROWS_AS(check_fact_ceiling(1, Rational(5)), DomainError);
  for (long k = 2; k <= 64; ++k)
    for (long alpha = k; alpha <= 3000; ++alpha) CHECK(check_fact_ceiling(k, Rational(alpha)).holds);
}

TEST_CASE("fact: iterated-log growth") {
  auto r = check_fact_iterlog(3, 2);
  CHECK(r.lhs == doctest::Approx(12 * std::log2(3.0)).epsilon(1e-9));
  CHECK(r.rhs == 27);
  CHECK(r.holds);
  CHECK(check_fact_iterlog(3, 10).holds);
  CHECK_THROWS_AS(check_fact_iterlog(2, 2), DomainError);
  CHECK_THROWS_AS(check_fact_iterlog(3, 1), DomainError);
  for (long k = 3; k <= 64; ++k)
    for (long i = 2; i <= 32; ++i) CHECK(check_fact_iterlog(k, i).holds);
}

TEST_CASE("pick_k formulas") {
  auto c4 = pick_k_fixed_r_formula(4);
  CHECK(c4.k == 16);
  CHECK(c4.m == 4);
  CHECK(c4.c == Rational(1));
  auto c5 = pick_k_fixed_r_formula(5);
  CHECK(c5.k == 64);
  CHECK(c5.c == Rational(8, 5));  // c1 = 1.6

  // Full check with the k <= log log N precondition needs a gigantic N.
  auto big = pick_k_fixed_r(pow2(64));  // N = 2^(2^64), log* N = 6
  CHECK(big.k == 64);
  CHECK_THROWS_AS(pick_k_fixed_r(BigInt(1024)), ConfigError);
}

TEST_CASE("pick_k_eps") {
  // eps slightly above e^4 - 1, so 4/ln(1+eps) < 1 and c2 = 1 works.
  Rational eps = parse_rational("53.599");
  auto c = pick_k_eps_formula(2, eps);
  CHECK(c.k == 16);
  CHECK(c.m == 4);
  CHECK(c.c == Rational(1));

  auto c1 = pick_k_eps_formula(6, Rational(1));  // 4/ln 2 = 5.7708, base 8
  CHECK(c1.m == 64);
  CHECK(c1.k == 4096);
  CHECK(c1.c == Rational(8));

  auto big = pick_k_eps(pow2(4096), Rational(1));  // N = 2^(2^4096)
  CHECK(big.k == 4096);
  CHECK_THROWS_AS(pick_k_eps(BigInt(4096), Rational(1)), ConfigError);
  CHECK_THROWS_AS(pick_k_eps(BigInt(1024), Rational(1, 1000000)), ConfigError);
}

TEST_CASE("paper w bound ceiling") {
  CHECK(paper_w_bound_ceiling(20, 4) == 320);
  CHECK(paper_w_bound_ceiling(4, 4) == 1);
  CHECK(paper_w_bound_ceiling(3, 2) == 1);  // exact boundary: value - 1/2 = 1
  CHECK(paper_w_bound_ceiling(5, 4) == 2);
}

TEST_CASE("w bound respected on a grid") {
  for (long n = 1; n <= 20; ++n) {
    for (long k = 2; k <= 16; ++k) {
      Rational a = dyadic(static_cast<unsigned long>(n));
      if (a > Rational(1, k)) continue;
      CHECK(compute_w(a, Rational(1, k)) <= paper_w_bound_ceiling(n, k));
    }
  }
}

TEST_CASE("parse_rational") {
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("0.3") == Rational(3, 10));
  CHECK(parse_rational("2^-20") == dyadic(20));
  CHECK(parse_rational("2^10") == Rational(1024));
  CHECK(parse_rational("16") == Rational(16));
}

}  // TEST_SUITE
