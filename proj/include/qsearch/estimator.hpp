#pragma once

#include <string>
#include <vector>

#include "qsearch/constructions.hpp"

namespace qsearch::estimator {

struct ResourceEstimate {
  int level = 0;
  bool is_boost = false;
  BigInt n_i;
  BigInt w_i;
  BigInt q_i;
  BigInt e_i;
  constructions::PreconditionReport pre;
};

struct BoundCheck {
  std::string name;
  std::string lhs;
  std::string rhs;
  bool holds = false;
  bool preconditions = true;
  std::string note;
};

struct RecursiveEstimate {
  constructions::RecursionSchedule schedule;
  std::vector<ResourceEstimate> levels;
  std::vector<BoundCheck> checks;
  /// True when every check whose preconditions hold also holds.
  bool clean() const;
};

/// Exact surd comparisons: both sides nonnegative, decided by squaring
/// over exact integers and rationals, never by floating point.
bool le_coef_sqrt_pow2(const Rational& lhs, const Rational& coef, const BigInt& exp2);
bool ge_coef_sqrt_pow2(const Rational& lhs, const Rational& coef, const BigInt& exp2);

/// lhs <= (pi / pi_div) * coef * sqrt(2^exp2), certified against the
/// adverse end of a high-precision enclosure of pi.
bool le_pi_bound(const BigInt& lhs, long pi_div, const Rational& coef, const BigInt& exp2,
                 const Interval& extra_factor);

ResourceEstimate estimate_c1(int n1, long k, std::vector<BoundCheck>* checks = nullptr);

RecursiveEstimate estimate_recursive(const BigInt& n_exponent, long k, int r,
                                     bool boost = false, bool relaxed = false);

/// Estimate wrappers for the one-lift recipe and the top-level parameter
/// choices, with their proof-level inequalities.
struct Grover02Estimate {
  constructions::Grover02Plan plan;
  std::vector<ResourceEstimate> levels;
  std::vector<BoundCheck> checks;
};
Grover02Estimate estimate_grover02(const BigInt& n_exponent);

struct MainEstimate {
  constructions::MainPlan plan;
  std::vector<ResourceEstimate> levels;
  std::vector<BoundCheck> checks;
};
MainEstimate estimate_main_fixed_r(const BigInt& n_exponent, int r, bool relaxed = false,
                                   long k_override = 0);
MainEstimate estimate_main_eps(const BigInt& n_exponent, const Rational& eps,
                               bool relaxed = false);

/// Named-inequality checkers driven by raw instance data.
struct BoundInstance {
  BigInt q_in, e_in, q_out, e_out, w;
  BigInt n, m;  // log2 of the database sizes
  long k = 0;
  long r = 0;
  BigInt n1;
  Rational eps;
  BigInt n_tot;  // total wire count for the thm21 gate bound
};
std::vector<BoundCheck> check_bounds(const std::string& kind, const BoundInstance& inst);

/// Report tables, columns: level, n_i, Q_i, E_i, bound, holds, preconditions.
std::string to_tsv(const std::vector<ResourceEstimate>& levels,
                   const std::vector<BoundCheck>& checks);
std::string to_json(const std::vector<ResourceEstimate>& levels,
                    const std::vector<BoundCheck>& checks);

}  // namespace qsearch::estimator
