#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "avoid/rational.hpp"

namespace avoid {

// Certified lower bound on prod_{k >= min_len} (1 - 2^{-delta*k^w})^{k^j}
// where w = threshold_power. A finite prefix is evaluated in 192-bit
// arithmetic rounded towards the sound side; the tail is bounded below via
// log(1-x) >= -2x for x <= 1/2, with the tail sum majorized by a geometric
// series in closed form. Requires 2^{-delta*min_len} < 1/2. The returned
// bound lies in (0, 1] and is nondecreasing in min_len.
Rational certified_product(const Rational& delta, std::int64_t min_len,
                           int weight_exponent, int threshold_power = 1);

struct LllPlan {
  Rational alpha;
  Rational delta;           // fixed at (1-alpha)/4
  std::int64_t min_len = 0; // L: smallest covered forbidden length
  Rational d_lower;         // certified per-symbol product constant
  Rational gamma;           // rational upper bound on -log2(d_lower)
  Rational margin;          // (1-alpha) - delta - gamma
};

struct GridLllPlan {
  int dimension = 1;
  Rational alpha;
  Rational delta;
  std::int64_t min_len = 0;
  std::vector<Rational> monomial_lower;  // D_0..D_d, one per monomial k^j
  Rational d_lower;  // combined constant for the exponent l^d
  Rational gamma;
  Rational margin;
};

inline constexpr std::int64_t kDefaultSearchCeiling = std::int64_t(1) << 20;

// Least L (doubling then bisection) for which the certified gamma drops
// below (1-alpha)/2; throws when the ceiling is exceeded.
LllPlan make_plan(const Rational& alpha,
                  std::int64_t ceiling = kDefaultSearchCeiling);
GridLllPlan make_grid_plan(const Rational& alpha, int dimension,
                           std::int64_t ceiling = kDefaultSearchCeiling);

// Exact integer verdict of 2^{-delta*l} * d_lower^l >= 2^{-(1-alpha)*l}.
bool check_condition(const LllPlan& plan, std::int64_t l);

std::string plan_text(const LllPlan& plan);
std::string plan_text(const GridLllPlan& plan);

}  // namespace avoid
