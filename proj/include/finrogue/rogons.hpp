#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string_view>

#include "finrogue/model.hpp"

namespace finrogue {

/// Closed-form solutions available for evaluation.
enum class Solution { plane, rogon1, rogon2 };

std::string_view to_string(Solution which) noexcept;
std::optional<Solution> parse_solution(std::string_view name) noexcept;

/// Pointwise solution psi(S, t).
using Sampler = std::function<Complex(double s, double t)>;

/// k*s + (sigma/2)(alpha^2 - k^2)*t, the phase of the common carrier wave.
double carrier_phase(const MarketParams& p, double s, double t) noexcept;

/// Plane-wave background A*exp(i*carrier_phase).
Complex plane_wave(const MarketParams& p, double s, double t) noexcept;

/// First-order rogue wave: the background with a single rational dip/peak,
/// reaching 3|A| at the comoving origin.
Complex rogon1(const MarketParams& p, double s, double t) noexcept;

/// Values of the polynomials P2, Q2, R2 of the second-order solution.
struct PolynomialTriple {
  double p2;
  double q2;
  double r2;
};

/// Evaluated in the comoving variable xi = s - sigma*k*t, nested in
/// X = alpha^2 xi^2 and T = sigma^2 alpha^4 t^2.
PolynomialTriple rogon2_polynomials(const MarketParams& p, double s, double t) noexcept;

/// Second-order rogue wave A*[1 + (P2 + i Q2)/R2]*exp(i*carrier_phase),
/// reaching 5|A| at the comoving origin. Throws NumericalError if R2 is not
/// safely positive.
Complex rogon2(const MarketParams& p, double s, double t);

Complex evaluate(Solution which, const MarketParams& p, double s, double t);

Sampler make_sampler(Solution which, const MarketParams& p);

/// Samples a closed-form solution on every grid point. Rows are split across
/// `workers` threads; the result does not depend on the split.
WaveField eval_field(Solution which, const MarketParams& p, const SpaceTimeGrid& g,
                     unsigned workers = 1);

struct PeakStatistics {
  double max_intensity;
  double s_at;
  double t_at;
  std::size_t row;
  std::size_t col;
};

/// Grid argmax of |psi|^2; ties go to the smallest t, then the smallest S.
PeakStatistics peak_statistics(const WaveField& field);

}  // namespace finrogue
