#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace finrogue {

using Complex = std::complex<double>;

/**
 * Parameters of the nonlinear option-pricing wave equation
 *
 *   i psi_t = -(sigma/2) psi_SS - beta |psi|^2 psi
 *
 * together with the scaling alpha and gauge k of its rational solutions.
 * Invariants: all fields finite, sigma*beta > 0, alpha != 0.
 */
class MarketParams {
public:
  /// Validating constructor; throws ValidationError.
  static MarketParams make(double sigma, double beta, double alpha, double k);

  /// Bypasses validation. Only meant for probing limits the model excludes
  /// (e.g. the linear beta = 0 propagator); background_amplitude() is
  /// meaningless for such values.
  static MarketParams unchecked(double sigma, double beta, double alpha, double k) noexcept {
    return MarketParams(sigma, beta, alpha, k);
  }

  double sigma() const noexcept { return sigma_; }
  double beta() const noexcept { return beta_; }
  double alpha() const noexcept { return alpha_; }
  double k() const noexcept { return k_; }

  MarketParams with_gauge(double k) const { return make(sigma_, beta_, alpha_, k); }

  bool operator==(const MarketParams&) const = default;

private:
  MarketParams(double sigma, double beta, double alpha, double k) noexcept
      : sigma_(sigma), beta_(beta), alpha_(alpha), k_(k) {}

  double sigma_;
  double beta_;
  double alpha_;
  double k_;
};

inline MarketParams make_params(double sigma, double beta, double alpha, double k) {
  return MarketParams::make(sigma, beta, alpha, k);
}

/// alpha * sqrt(sigma / (2 beta)). Signed: a negative alpha flips the field.
double background_amplitude(const MarketParams& p) noexcept;

/// Nearest gauge k' = 2 pi m / length (m integer), the only carriers
/// exp(i k' S) that are periodic on a domain of that length.
double admissible_gauge(double k, double length);

/**
 * Uniform sampling of the (S, t) rectangle. S is periodic: the samples are
 * S_j = s_min + j*dS, j = 0..n_s-1, with dS = (s_max - s_min)/n_s, so s_max
 * itself is excluded. Time samples include both ends:
 * t_i = t_min + i*dt, dt = (t_max - t_min)/max(n_t - 1, 1).
 */
struct SpaceTimeGrid {
  double s_min = 0.0;
  double s_max = 1.0;
  std::size_t n_s = 1;
  double t_min = 0.0;
  double t_max = 0.0;
  std::size_t n_t = 1;

  double length() const noexcept { return s_max - s_min; }
  double ds() const noexcept { return (s_max - s_min) / static_cast<double>(n_s); }
  double dt() const noexcept {
    return n_t > 1 ? (t_max - t_min) / static_cast<double>(n_t - 1) : 0.0;
  }
  double s_at(std::size_t j) const noexcept { return s_min + static_cast<double>(j) * ds(); }
  double t_at(std::size_t i) const noexcept { return t_min + static_cast<double>(i) * dt(); }
  std::size_t size() const noexcept { return n_s * n_t; }

  bool operator==(const SpaceTimeGrid&) const = default;
};

/// Validating factory; throws ValidationError on inverted bounds, zero counts
/// or a repeated time sample (t_min == t_max with n_t > 1).
SpaceTimeGrid make_grid(double s_min, double s_max, std::size_t n_s,
                        double t_min, double t_max, std::size_t n_t);

/// Grid holding a single time slice over a periodic S row.
SpaceTimeGrid make_slice(double s_min, double length, std::size_t n_s, double t);

/// Complex samples of psi on a grid, time-major: samples[i*n_s + j] is
/// psi(S_j, t_i).
struct WaveField {
  SpaceTimeGrid grid;
  std::vector<Complex> samples;
  MarketParams params;
  std::string label;

  const Complex& at(std::size_t i, std::size_t j) const { return samples[i * grid.n_s + j]; }
};

/// Throws ValidationError unless the sample count matches the grid and every
/// sample is finite.
void check_field(const WaveField& field);

bool is_power_of_two(std::size_t n) noexcept;

}  // namespace finrogue
