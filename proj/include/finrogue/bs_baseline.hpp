#pragma once

#include <functional>
#include <span>

namespace finrogue {

/// European option contract under the linear Black-Scholes model, in
/// time-to-maturity form.
struct BsParams {
  double r;
  double sigma_bs;
  double strike;
  double maturity;

  bool operator==(const BsParams&) const = default;
};

/// Throws ValidationError unless sigma_bs > 0, strike > 0, maturity >= 0 and
/// everything is finite.
BsParams make_bs_params(double r, double sigma_bs, double strike, double maturity);

/// Standard normal distribution function, 0.5*erfc(-x/sqrt(2)).
double normal_cdf(double x) noexcept;

/// Closed-form call value; the payoff max(s - K, 0) at zero maturity.
double bs_call_price(double s, const BsParams& bp);

/// Closed-form put value from the same d1/d2 machinery.
double bs_put_price(double s, const BsParams& bp);

/// |C - P - (s - K exp(-r tau))|.
double put_call_parity_gap(double s, const BsParams& bp);

/// Price as a function of spot and time to maturity.
using PriceFunction = std::function<double(double s, double tau)>;

/**
 * Max over s_grid of |C_t + (1/2) sigma^2 S^2 C_SS + r S C_S - r C| with the
 * derivatives taken by fourth-order centered differences of `price` (steps
 * bump*S in S and bump*tau in tau; C_t = -C_tau).
 *
 * Rejects a non-positive grid point, maturity == 0 and bump outside (0, 0.05].
 */
double bs_pde_residual(const PriceFunction& price, std::span<const double> s_grid,
                       const BsParams& bp, double bump);

}  // namespace finrogue
