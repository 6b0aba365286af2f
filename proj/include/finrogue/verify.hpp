#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "finrogue/model.hpp"
#include "finrogue/rogons.hpp"

namespace finrogue {

/// How the S-derivative treats the wrap-around of the sampled row.
enum class BoundaryTreatment {
  /// Plain Fourier differentiation of the row, i.e. of its periodic extension.
  periodic,
  /// Subtract Bernoulli-polynomial ramps carrying the value, slope and
  /// curvature jumps across the wrap (measured from the sampler), differentiate
  /// the now-smooth remainder spectrally and add the ramps back analytically.
  jump_corrected,
};

struct ResidualOptions {
  BoundaryTreatment boundary = BoundaryTreatment::jump_corrected;
  unsigned workers = 1;
};

/// Norms of R = i psi_t + (sigma/2) psi_SS + beta |psi|^2 psi over a grid.
struct ResidualReport {
  double linf = 0.0;        ///< max |R| over all samples
  double l2 = 0.0;          ///< max over time rows of sqrt(dS * sum |R|^2)
  std::size_t n_s = 0;
  std::size_t n_t = 0;
  double dt_probe = 0.0;
  double value_jump = 0.0;  ///< max over rows of |psi(s_max) - psi(s_min)|
  double slope_jump = 0.0;  ///< max over rows of |psi_S(s_max) - psi_S(s_min)|

  bool operator==(const ResidualReport&) const = default;
};

/**
 * Evaluates the residual of the wave equation for a pointwise candidate
 * solution. psi_SS is spectral along each S row; psi_t is the centered
 * five-point difference with step dt_probe, re-sampling the candidate at
 * t +- dt_probe and t +- 2 dt_probe.
 *
 * Requires a power-of-two n_s >= 8 and dt_probe > 0 (ValidationError).
 */
ResidualReport residual_at(const Sampler& sampler, const MarketParams& p,
                           const SpaceTimeGrid& g, double dt_probe,
                           const ResidualOptions& options = {});

/// residual_at for each probe step; dt_probes must be strictly decreasing
/// with at least two entries.
std::vector<ResidualReport> convergence_study(const Sampler& sampler, const MarketParams& p,
                                              const SpaceTimeGrid& g,
                                              std::span<const double> dt_probes,
                                              const ResidualOptions& options = {});

/// Residual of the time-translated candidate psi(S, t + t0).
ResidualReport time_shift_check(const Sampler& sampler, const MarketParams& p,
                                const SpaceTimeGrid& g, double t0, double dt_probe = 1e-3,
                                const ResidualOptions& options = {});

}  // namespace finrogue
