#include "avoid/lll_planner.hpp"

#include <mpfr.h>

#include <sstream>
#include <stdexcept>

namespace avoid {

namespace {

constexpr mpfr_prec_t kPrec = 192;

struct Real {
  mpfr_t v;
  explicit Real() { mpfr_init2(v, kPrec); }
  Real(const Real&) = delete;
  Real& operator=(const Real&) = delete;
  ~Real() { mpfr_clear(v); }
};

void set_rational(Real& out, const Rational& r, mpfr_rnd_t rnd) {
  mpfr_set_q(out.v, r.backend().data(), rnd);
}

Rational to_rational(const Real& x) {
  Rational r;
  mpfr_get_q(r.backend().data(), x.v);
  return r;
}

// 2^{-e} with the requested rounding, e an exact positive rational.
void exp2_neg(Real& out, const Rational& e, mpfr_rnd_t rnd) {
  Real t;
  set_rational(t, -e, rnd);  // monotone: rounding e's negation matches rnd
  mpfr_exp2(out.v, t.v, rnd);
}

BigInt int_pow(std::int64_t base, int exp) {
  BigInt r;
  mpz_ui_pow_ui(r.backend().data(), static_cast<unsigned long>(base),
                static_cast<unsigned long>(exp));
  return r;
}

BigInt binomial(int n, int k) {
  BigInt r;
  mpz_bin_uiui(r.backend().data(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(k));
  return r;
}

void check_product_args(const Rational& delta, std::int64_t min_len,
                        int weight_exponent, int threshold_power) {
  if (!(delta > 0)) throw std::invalid_argument("delta must be positive");
  if (min_len < 1) throw std::invalid_argument("min_len must be >= 1");
  if (weight_exponent < 0 || threshold_power < 1)
    throw std::invalid_argument("bad product exponents");
  // 2^{-delta*min_len} < 1/2, i.e. delta*min_len > 1.
  if (!(delta * min_len > 1))
    throw std::invalid_argument(
        "certification needs 2^{-delta*L} < 1/2 (delta*L > 1)");
}

}  // namespace

Rational certified_product(const Rational& delta, std::int64_t min_len,
                           int weight_exponent, int threshold_power) {
  check_product_args(delta, min_len, weight_exponent, threshold_power);
  const int j = weight_exponent, w = threshold_power;

  // Prefix extends at least to the point where delta*k^w covers the
  // precision budget; beyond it the tail bound is negligible.
  const BigInt budget = BigInt(160 + 64 * j);
  std::int64_t k0 =
      floor_root(ceil_rational(budget / delta), static_cast<unsigned long>(w))
          .convert_to<std::int64_t>();
  if (k0 < 1) k0 = 1;
  while (delta * Rational(int_pow(k0, w)) < Rational(budget)) ++k0;
  const std::int64_t cut = std::max(min_len - 1, k0);
  if (int_pow(cut + 1, std::max(j, w)) > (BigInt(1) << 62))
    throw std::invalid_argument("product exponents too large to certify");

  Real acc;
  mpfr_set_ui(acc.v, 1, MPFR_RNDD);
  for (std::int64_t k = min_len; k <= cut; ++k) {
    Rational e = delta * Rational(int_pow(k, w));
    Real x_up, factor;
    exp2_neg(x_up, e, MPFR_RNDU);
    mpfr_ui_sub(factor.v, 1, x_up.v, MPFR_RNDD);
    if (!(mpfr_sgn(factor.v) > 0))
      throw std::logic_error("product factor collapsed to zero");
    BigInt weight = int_pow(k, j);
    mpfr_pow_ui(factor.v, factor.v, weight.convert_to<unsigned long>(),
                MPFR_RNDD);
    mpfr_mul(acc.v, acc.v, factor.v, MPFR_RNDD);
  }

  // Tail from m = cut+1: x_k <= rho^k with rho = 2^{-delta*m^{w-1}}, and
  // k^j <= m^j * gamma^{k-m} with gamma = ((m+1)/m)^j, so
  //   sum_{k>=m} k^j x_k <= m^j rho^m / (1 - gamma*rho).
  const std::int64_t m = cut + 1;
  Real rho_up;
  exp2_neg(rho_up, delta * Rational(int_pow(m, w - 1)), MPFR_RNDU);

  Real gr_up;  // gamma*rho, rounded up
  set_rational(gr_up, Rational(int_pow(m + 1, j), int_pow(m, j)), MPFR_RNDU);
  mpfr_mul(gr_up.v, gr_up.v, rho_up.v, MPFR_RNDU);
  if (mpfr_cmp_ui(gr_up.v, 1) >= 0)
    throw std::logic_error("tail majorant is not contracting");

  Real sum_up, den_lo;
  mpfr_set_z(sum_up.v, BigInt(int_pow(m, j)).backend().data(), MPFR_RNDU);
  {
    Real rho_pow;
    mpfr_pow_ui(rho_pow.v, rho_up.v, static_cast<unsigned long>(m), MPFR_RNDU);
    mpfr_mul(sum_up.v, sum_up.v, rho_pow.v, MPFR_RNDU);
  }
  mpfr_ui_sub(den_lo.v, 1, gr_up.v, MPFR_RNDD);
  mpfr_div(sum_up.v, sum_up.v, den_lo.v, MPFR_RNDU);

  Real tail_lo;
  mpfr_mul_ui(sum_up.v, sum_up.v, 2, MPFR_RNDU);
  mpfr_neg(sum_up.v, sum_up.v, MPFR_RNDD);
  mpfr_exp(tail_lo.v, sum_up.v, MPFR_RNDD);

  mpfr_mul(acc.v, acc.v, tail_lo.v, MPFR_RNDD);
  Rational out = to_rational(acc);
  if (!(out > 0 && out <= 1))
    throw std::logic_error("certified product bound escaped (0,1]");
  return out;
}

namespace {

struct GridEvaluation {
  std::vector<Rational> monomials;
  Rational d_lower;
  Rational gamma;
};

GridEvaluation evaluate_grid(const Rational& delta, std::int64_t min_len,
                             int dim) {
  GridEvaluation ev;
  Real combined;
  mpfr_set_ui(combined.v, 1, MPFR_RNDD);
  for (int j = 0; j <= dim; ++j) {
    Rational pj = certified_product(delta, min_len, j, dim);
    ev.monomials.push_back(pj);
    // The monomial contributes P_j^{C(d,j) l^{d-j}} and l^{d-j} <= l^d/L^j,
    // so P_j^{C(d,j)/L^j} is a valid per-l^d factor.
    Real f;
    set_rational(f, pj, MPFR_RNDD);
    BigInt root = int_pow(min_len, j);
    if (root > (BigInt(1) << 62))
      throw std::invalid_argument("monomial root exponent too large");
    if (root > 1)
      mpfr_rootn_ui(f.v, f.v, root.convert_to<unsigned long>(), MPFR_RNDD);
    BigInt c = binomial(dim, j);
    mpfr_pow_ui(f.v, f.v, c.convert_to<unsigned long>(), MPFR_RNDD);
    mpfr_mul(combined.v, combined.v, f.v, MPFR_RNDD);
  }
  ev.d_lower = to_rational(combined);

  Real g;
  mpfr_log2(g.v, combined.v, MPFR_RNDD);
  mpfr_neg(g.v, g.v, MPFR_RNDU);
  ev.gamma = to_rational(g);
  return ev;
}

}  // namespace

GridLllPlan make_grid_plan(const Rational& alpha, int dimension,
                           std::int64_t ceiling) {
  if (!(alpha > 0 && alpha < 1))
    throw std::invalid_argument("alpha must lie in (0,1)");
  if (dimension < 1 || dimension > 4)
    throw std::invalid_argument("dimension must be in 1..4");

  GridLllPlan plan;
  plan.dimension = dimension;
  plan.alpha = alpha;
  plan.delta = (Rational(1) - alpha) / 4;
  const Rational target = (Rational(1) - alpha) / 2;

  // Smallest admissible L (delta*L > 1), then doubling and bisection on
  // the monotone predicate gamma(L) < target.
  std::int64_t floor_len = 1;
  while (!(plan.delta * floor_len > 1)) ++floor_len;

  auto admissible = [&](std::int64_t len) {
    return evaluate_grid(plan.delta, len, dimension).gamma < target;
  };
  std::int64_t hi = floor_len;
  if (!admissible(hi)) {
    std::int64_t lo = hi;
    do {
      lo = hi;
      hi *= 2;
      if (hi > ceiling)
        throw std::runtime_error(
            "search ceiling exceeded; alpha too close to 1 for ceiling " +
            std::to_string(ceiling));
    } while (!admissible(hi));
    while (hi - lo > 1) {
      std::int64_t mid = lo + (hi - lo) / 2;
      (admissible(mid) ? hi : lo) = mid;
    }
  }

  plan.min_len = hi;
  GridEvaluation ev = evaluate_grid(plan.delta, plan.min_len, dimension);
  plan.monomial_lower = std::move(ev.monomials);
  plan.d_lower = ev.d_lower;
  plan.gamma = ev.gamma;
  plan.margin = Rational(1) - alpha - plan.delta - plan.gamma;
  return plan;
}

LllPlan make_plan(const Rational& alpha, std::int64_t ceiling) {
  GridLllPlan grid = make_grid_plan(alpha, 1, ceiling);
  LllPlan plan;
  plan.alpha = grid.alpha;
  plan.delta = grid.delta;
  plan.min_len = grid.min_len;
  plan.d_lower = grid.d_lower;
  plan.gamma = grid.gamma;
  plan.margin = grid.margin;
  return plan;
}

bool check_condition(const LllPlan& plan, std::int64_t l) {
  if (l < plan.min_len)
    throw std::invalid_argument("condition is only covered for l >= L");
  // 2^{-delta l} D^l >= 2^{-(1-alpha) l}  <=>  D^l >= 2^{-e},
  // e = (1 - alpha - delta) * l. With D = a/b and e = u/v (v > 0) this is
  // a^{E} * 2^u >= b^{E} for E = l*v, decided in integers. Bit lengths
  // usually separate the sides without forming the powers.
  Rational e = (Rational(1) - plan.alpha - plan.delta) * l;
  BigInt u = numerator(e), v = denominator(e);
  BigInt a = numerator(plan.d_lower), b = denominator(plan.d_lower);
  BigInt big_e = BigInt(l) * v;
  BigInt shift_l = u >= 0 ? u : BigInt(0);
  BigInt shift_r = u < 0 ? -u : BigInt(0);
  BigInt bits_a = BigInt(msb(a)) + 1, bits_b = BigInt(msb(b)) + 1;
  BigInt lhs_min = big_e * (bits_a - 1) + 1 + shift_l;
  BigInt lhs_max = big_e * bits_a + shift_l;
  BigInt rhs_min = big_e * (bits_b - 1) + 1 + shift_r;
  BigInt rhs_max = big_e * bits_b + shift_r;
  if (lhs_min > rhs_max) return true;
  if (lhs_max < rhs_min) return false;
  if (big_e > (BigInt(1) << 22))
    throw std::invalid_argument("condition too large to evaluate exactly");
  unsigned long exp = big_e.convert_to<unsigned long>();
  BigInt lhs, rhs;
  mpz_pow_ui(lhs.backend().data(), a.backend().data(), exp);
  mpz_pow_ui(rhs.backend().data(), b.backend().data(), exp);
  lhs <<= shift_l.convert_to<unsigned long>();
  rhs <<= shift_r.convert_to<unsigned long>();
  return lhs >= rhs;
}

namespace {

void plan_common(std::ostringstream& os, const Rational& alpha,
                 const Rational& delta, std::int64_t min_len,
                 const Rational& d_lower, const Rational& gamma,
                 const Rational& margin) {
  os << "alpha=" << format_rational(alpha) << "\n";
  os << "delta=" << format_rational(delta) << "\n";
  os << "L=" << min_len << "\n";
  os << "D_lower=" << format_rational(d_lower) << "\n";
  os << "gamma=" << format_rational(gamma) << "\n";
  os << "margin=" << format_rational(margin) << "\n";
}

}  // namespace

std::string plan_text(const LllPlan& plan) {
  std::ostringstream os;
  plan_common(os, plan.alpha, plan.delta, plan.min_len, plan.d_lower,
              plan.gamma, plan.margin);
  return os.str();
}

std::string plan_text(const GridLllPlan& plan) {
  std::ostringstream os;
  os << "dimension=" << plan.dimension << "\n";
  plan_common(os, plan.alpha, plan.delta, plan.min_len, plan.d_lower,
              plan.gamma, plan.margin);
  for (std::size_t j = 0; j < plan.monomial_lower.size(); ++j)
    os << "D_" << j << "=" << format_rational(plan.monomial_lower[j]) << "\n";
  return os.str();
}

}  // namespace avoid
