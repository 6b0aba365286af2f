#include "finrogue/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "finrogue/error.hpp"

namespace finrogue {

MarketParams MarketParams::make(double sigma, double beta, double alpha, double k) {
  if (!std::isfinite(sigma) || !std::isfinite(beta) || !std::isfinite(alpha) ||
      !std::isfinite(k)) {
    throw ValidationError("market parameters must be finite");
  }
  if (!(sigma * beta > 0.0)) {
    std::ostringstream msg;
    msg << "sigma*beta must be > 0 (got sigma=" << sigma << ", beta=" << beta << ")";
    throw ValidationError(msg.str());
  }
  if (alpha == 0.0) {
    throw ValidationError("alpha must be nonzero");
  }
  return MarketParams(sigma, beta, alpha, k);
}

double background_amplitude(const MarketParams& p) noexcept {
  return p.alpha() * std::sqrt(p.sigma() / (2.0 * p.beta()));
}

double admissible_gauge(double k, double length) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw ValidationError("domain length must be positive");
  }
  const double unit = 2.0 * std::numbers::pi / length;
  return std::round(k / unit) * unit;
}

SpaceTimeGrid make_grid(double s_min, double s_max, std::size_t n_s,
                        double t_min, double t_max, std::size_t n_t) {
  if (!std::isfinite(s_min) || !std::isfinite(s_max) || !std::isfinite(t_min) ||
      !std::isfinite(t_max)) {
    throw ValidationError("grid bounds must be finite");
  }
  if (n_s == 0 || n_t == 0) throw ValidationError("grid sample counts must be >= 1");
  if (!(s_min < s_max) && !(s_min == s_max && n_s == 1)) {
    throw ValidationError("grid requires s_min < s_max (or s_min == s_max with n_s == 1)");
  }
  if (!(t_min <= t_max)) throw ValidationError("grid requires t_min <= t_max");
  if (t_min == t_max && n_t > 1) {
    throw ValidationError("grid with t_min == t_max must have n_t == 1");
  }
  return SpaceTimeGrid{s_min, s_max, n_s, t_min, t_max, n_t};
}

SpaceTimeGrid make_slice(double s_min, double length, std::size_t n_s, double t) {
  return make_grid(s_min, s_min + length, n_s, t, t, 1);
}

void check_field(const WaveField& field) {
  if (field.samples.size() != field.grid.size()) {
    throw ValidationError("wave field sample count does not match its grid");
  }
  for (const auto& z : field.samples) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw ValidationError("wave field contains non-finite samples");
    }
  }
}

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace finrogue
