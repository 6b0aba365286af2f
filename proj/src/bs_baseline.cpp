#include "finrogue/bs_baseline.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "finrogue/error.hpp"

namespace finrogue {

namespace {

struct D12 {
  double d1;
  double d2;
};

D12 d_terms(double s, const BsParams& bp) {
  const double vol = bp.sigma_bs * std::sqrt(bp.maturity);
  const double d1 =
      (std::log(s / bp.strike) + (bp.r + 0.5 * bp.sigma_bs * bp.sigma_bs) * bp.maturity) / vol;
  return {d1, d1 - vol};
}

void check_spot(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw ValidationError("spot price must be positive");
}

}  // namespace

BsParams make_bs_params(double r, double sigma_bs, double strike, double maturity) {
  if (!std::isfinite(r) || !std::isfinite(sigma_bs) || !std::isfinite(strike) ||
      !std::isfinite(maturity)) {
    throw ValidationError("Black-Scholes parameters must be finite");
  }
  if (!(sigma_bs > 0.0)) throw ValidationError("sigma_bs must be > 0");
  if (!(strike > 0.0)) throw ValidationError("strike must be > 0");
  if (!(maturity >= 0.0)) throw ValidationError("maturity must be >= 0");
  return {r, sigma_bs, strike, maturity};
}

double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double bs_call_price(double s, const BsParams& bp) {
  check_spot(s);
  if (bp.maturity == 0.0) return std::max(s - bp.strike, 0.0);
  const auto [d1, d2] = d_terms(s, bp);
  return s * normal_cdf(d1) - bp.strike * std::exp(-bp.r * bp.maturity) * normal_cdf(d2);
}

double bs_put_price(double s, const BsParams& bp) {
  check_spot(s);
  if (bp.maturity == 0.0) return std::max(bp.strike - s, 0.0);
  const auto [d1, d2] = d_terms(s, bp);
  return bp.strike * std::exp(-bp.r * bp.maturity) * normal_cdf(-d2) - s * normal_cdf(-d1);
}

double put_call_parity_gap(double s, const BsParams& bp) {
  const double forward = s - bp.strike * std::exp(-bp.r * bp.maturity);
  return std::abs(bs_call_price(s, bp) - bs_put_price(s, bp) - forward);
}

double bs_pde_residual(const PriceFunction& price, std::span<const double> s_grid,
                       const BsParams& bp, double bump) {
  if (!(bump > 0.0) || bump > 0.05) {
    throw ValidationError("bump must lie in (0, 0.05] for the centered differences to be accurate");
  }
  if (!(bp.maturity > 0.0)) {
    throw ValidationError("PDE residual needs maturity > 0 (the payoff is not differentiable)");
  }
  const double tau = bp.maturity;
  const double ht = bump * tau;
  const double half_var = 0.5 * bp.sigma_bs * bp.sigma_bs;
  double worst = 0.0;
  for (double s : s_grid) {
    check_spot(s);
    const double h = bump * s;
    const double c0 = price(s, tau);
    const double cm2 = price(s - 2.0 * h, tau), cm1 = price(s - h, tau);
    const double cp1 = price(s + h, tau), cp2 = price(s + 2.0 * h, tau);
    const double c_s = (8.0 * (cp1 - cm1) - (cp2 - cm2)) / (12.0 * h);
    const double c_ss = (16.0 * (cp1 + cm1) - (cp2 + cm2) - 30.0 * c0) / (12.0 * h * h);
    const double c_tau = (8.0 * (price(s, tau + ht) - price(s, tau - ht)) -
                          (price(s, tau + 2.0 * ht) - price(s, tau - 2.0 * ht))) /
                         (12.0 * ht);
    const double residual = -c_tau + half_var * s * s * c_ss + bp.r * s * c_s - bp.r * c0;
    if (!std::isfinite(residual)) throw NumericalError("price residual is not finite");
    worst = std::max(worst, std::abs(residual));
  }
  return worst;
}

}  // namespace finrogue
