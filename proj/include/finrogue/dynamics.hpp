#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "finrogue/error.hpp"
#include "finrogue/model.hpp"
#include "finrogue/rogons.hpp"

namespace finrogue {

/// psi(., t_now) on the periodic row S_j = s_min + j*length/n_s.
struct SimState {
  std::vector<Complex> samples;
  double t_now = 0.0;
  MarketParams params;
  double s_min = 0.0;
  double length = 1.0;

  std::size_t n_s() const noexcept { return samples.size(); }
  double ds() const noexcept { return length / static_cast<double>(samples.size()); }
  double s_at(std::size_t j) const noexcept { return s_min + static_cast<double>(j) * ds(); }
};

/// Samples `initial` at time t on the periodic row. Requires a power-of-two
/// n_s and a positive length.
SimState make_state(const Sampler& initial, const MarketParams& p, double s_min,
                    double length, std::size_t n_s, double t);

/// Discrete mass dS * sum |psi_j|^2.
double conserved_mass(const SimState& state);

/// dS * sum [(sigma/2)|psi_S|^2 - (beta/2)|psi|^4], psi_S spectral.
double conserved_hamiltonian(const SimState& state);

/**
 * Strang splitting for i psi_t + (sigma/2) psi_SS + beta |psi|^2 psi = 0:
 * half a nonlinear phase rotation psi *= exp(i beta |psi|^2 dt/2), the exact
 * dispersive flow exp(-i (sigma/2) kappa^2 dt) in Fourier space, and the
 * second nonlinear half step. Both subflows are exact, so the step is
 * time-reversible and conserves the discrete mass.
 */
class SplitStepPropagator {
public:
  SplitStepPropagator(const MarketParams& p, double length, std::size_t n_s, double dt);
  ~SplitStepPropagator();
  SplitStepPropagator(SplitStepPropagator&&) noexcept;
  SplitStepPropagator& operator=(SplitStepPropagator&&) noexcept;

  double dt() const noexcept;

  /// Advances in place by dt; throws NumericalError on non-finite values.
  void step(SimState& state);

  double hamiltonian(const SimState& state);

  /// Normalized Fourier coefficients psi_hat_m / n_s of the current state.
  std::vector<Complex> spectrum(const SimState& state);

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

SimState strang_step(const SimState& state, double dt);

struct SimulationReport {
  std::vector<double> times;
  std::vector<double> error_linf_vs_analytic;  ///< empty without a reference
  std::vector<double> mass_trace;
  std::vector<double> hamiltonian_trace;
  std::vector<WaveField> snapshots;
  double boundary_value_jump = 0.0;  ///< |ref(s_min + L) - ref(s_min)| at start
};

/// Thrown when the field stops being finite; carries everything recorded up
/// to the last good step.
class BlowUpError : public NumericalError {
public:
  BlowUpError(const std::string& what, SimulationReport partial)
      : NumericalError(what), partial_(std::make_shared<SimulationReport>(std::move(partial))) {}
  const SimulationReport& partial() const noexcept { return *partial_; }

private:
  std::shared_ptr<const SimulationReport> partial_;
};

struct SimulateOptions {
  /// Largest tolerated |ref(s_min + L, t0) - ref(s_min, t0)| for a reference
  /// that should be representable on the periodic domain.
  double max_boundary_jump = 1e-8;
};

/**
 * Marches `initial` to t_end with fixed steps dt. Traces are recorded at the
 * initial time and after every step; snapshots at the requested times, which
 * must fall on step boundaries. With a reference sampler the pointwise max
 * error against it is recorded as well.
 */
SimulationReport simulate(const SimState& initial, double t_end, double dt,
                          const std::optional<Sampler>& reference,
                          const std::vector<double>& snapshot_times,
                          const SimulateOptions& options = {});

/// Linear-stability growth rate of a kappa-modulation on the plane wave,
/// kappa*sqrt(sigma*beta*A^2 - sigma^2 kappa^2/4), zero beyond the cutoff
/// kappa^2 = 2 alpha^2.
double mi_growth_rate(const MarketParams& p, double kappa);

struct MiResult {
  SimulationReport report;
  double kappa = 0.0;
  double phase_offset = 0.0;
  double oracle_rate = 0.0;
  std::optional<double> fitted_rate;  ///< empty when eps == 0
  double fit_t_begin = 0.0;
  double fit_t_end = 0.0;
  std::vector<double> mode_times;
  std::vector<double> mode_amplitude;  ///< (|psi_hat_m| + |psi_hat_-m|)/n_s
  double max_sideband = 0.0;           ///< largest non-carrier mode seen
};

/**
 * Modulation-instability probe: evolves A(1 + eps cos(kappa S + theta)),
 * kappa = 2 pi m_pert / length, with theta drawn from rng_seed, and fits the
 * exponential growth of the kappa mode. The fit uses the second half of the
 * interval before the mode reaches 0.1|A| (or the whole second half of the
 * run if it never does). The gauge k of p is not used.
 */
MiResult mi_scenario(const MarketParams& p, double length, std::size_t n_s, double eps,
                     std::size_t m_pert, double t_end, double dt, std::uint64_t rng_seed);

}  // namespace finrogue
