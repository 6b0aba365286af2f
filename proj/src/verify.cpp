#include "finrogue/verify.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "finrogue/error.hpp"
#include "finrogue/spectral.hpp"

namespace finrogue {

namespace {

struct RowResult {
  double linf = 0.0;
  double l2 = 0.0;
  double value_jump = 0.0;
  double slope_jump = 0.0;
};

struct EdgeDerivatives {
  Complex value;
  Complex first;
  Complex second;
};

// Sixth-order centered differences of the sampler around s.
EdgeDerivatives edge_derivatives(const Sampler& f, double s, double t, double h) {
  const Complex m3 = f(s - 3.0 * h, t), m2 = f(s - 2.0 * h, t), m1 = f(s - h, t);
  const Complex c0 = f(s, t);
  const Complex p1 = f(s + h, t), p2 = f(s + 2.0 * h, t), p3 = f(s + 3.0 * h, t);
  const Complex first = (45.0 * (p1 - m1) - 9.0 * (p2 - m2) + (p3 - m3)) / (60.0 * h);
  const Complex second =
      (270.0 * (p1 + m1) - 27.0 * (p2 + m2) + 2.0 * (p3 + m3) - 490.0 * c0) / (180.0 * h * h);
  return {c0, first, second};
}

RowResult residual_row(const Sampler& f, const MarketParams& p, const SpaceTimeGrid& g,
                       double t, double dt_probe, BoundaryTreatment boundary, Fft& fft,
                       std::vector<Complex>& psi, std::vector<Complex>& work) {
  const std::size_t n = g.n_s;
  const double length = g.length();
  const double ds = g.ds();

  for (std::size_t j = 0; j < n; ++j) psi[j] = f(g.s_at(j), t);

  const auto lo = edge_derivatives(f, g.s_min, t, ds);
  const auto hi = edge_derivatives(f, g.s_max, t, ds);
  const Complex jump0 = hi.value - lo.value;
  const Complex jump1 = hi.first - lo.first;
  const Complex jump2 = hi.second - lo.second;

  RowResult out;
  out.value_jump = std::abs(jump0);
  out.slope_jump = std::abs(jump1);

  // ramp(y) = J0 B1(y) + J1 L/2 B2(y) + J2 L^2/6 B3(y), y = (S - s_min)/L,
  // whose periodic extension jumps by exactly J0, J1, J2 in value, slope and
  // curvature; ramp'' = J1/L + J2 B1(y).
  const bool corrected = boundary == BoundaryTreatment::jump_corrected;
  if (corrected) {
    for (std::size_t j = 0; j < n; ++j) {
      const double y = static_cast<double>(j) / static_cast<double>(n);
      const double b1 = y - 0.5;
      const double b2 = y * y - y + 1.0 / 6.0;
      const double b3 = y * (y * (y - 1.5) + 0.5);
      work[j] = psi[j] - (jump0 * b1 + jump1 * (0.5 * length * b2) +
                          jump2 * (length * length / 6.0 * b3));
    }
  } else {
    std::copy(psi.begin(), psi.end(), work.begin());
  }
  spectral_second_derivative(fft, work, length, work);

  const Complex i_unit(0.0, 1.0);
  const double half_sigma = 0.5 * p.sigma();
  double sum_sq = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double s = g.s_at(j);
    Complex psi_ss = work[j];
    if (corrected) {
      const double y = static_cast<double>(j) / static_cast<double>(n);
      psi_ss += jump1 / length + jump2 * (y - 0.5);
    }
    const Complex psi_t = (f(s, t - 2.0 * dt_probe) - 8.0 * f(s, t - dt_probe) +
                           8.0 * f(s, t + dt_probe) - f(s, t + 2.0 * dt_probe)) /
                          (12.0 * dt_probe);
    const Complex r = i_unit * psi_t + half_sigma * psi_ss + p.beta() * std::norm(psi[j]) * psi[j];
    const double mag = std::abs(r);
    out.linf = std::max(out.linf, mag);
    sum_sq += mag * mag;
  }
  out.l2 = std::sqrt(ds * sum_sq);
  return out;
}

}  // namespace

ResidualReport residual_at(const Sampler& sampler, const MarketParams& p,
                           const SpaceTimeGrid& g, double dt_probe,
                           const ResidualOptions& options) {
  if (!is_power_of_two(g.n_s) || g.n_s < 8) {
    throw ValidationError("residual requires a power-of-two n_s >= 8");
  }
  if (!(dt_probe > 0.0) || !std::isfinite(dt_probe)) {
    throw ValidationError("residual requires dt_probe > 0");
  }

  std::vector<RowResult> rows(g.n_t);
  auto run = [&](std::size_t begin, std::size_t end) {
    Fft fft(g.n_s);
    std::vector<Complex> psi(g.n_s), work(g.n_s);
    for (std::size_t i = begin; i < end; ++i) {
      rows[i] = residual_row(sampler, p, g, g.t_at(i), dt_probe, options.boundary, fft, psi, work);
    }
  };

  const std::size_t nworkers = std::clamp<std::size_t>(options.workers, 1, g.n_t);
  if (nworkers == 1) {
    run(0, g.n_t);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(nworkers);
    const std::size_t chunk = (g.n_t + nworkers - 1) / nworkers;
    for (std::size_t w = 0; w < nworkers; ++w) {
      const std::size_t begin = std::min(g.n_t, w * chunk);
      const std::size_t end = std::min(g.n_t, begin + chunk);
      pool.emplace_back([&, w, begin, end] {
        try {
          run(begin, end);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  ResidualReport report;
  report.n_s = g.n_s;
  report.n_t = g.n_t;
  report.dt_probe = dt_probe;
  for (const auto& row : rows) {
    if (!std::isfinite(row.linf) || !std::isfinite(row.l2)) {
      throw NumericalError("residual is not finite");
    }
    report.linf = std::max(report.linf, row.linf);
    report.l2 = std::max(report.l2, row.l2);
    report.value_jump = std::max(report.value_jump, row.value_jump);
    report.slope_jump = std::max(report.slope_jump, row.slope_jump);
  }
  return report;
}

std::vector<ResidualReport> convergence_study(const Sampler& sampler, const MarketParams& p,
                                              const SpaceTimeGrid& g,
                                              std::span<const double> dt_probes,
                                              const ResidualOptions& options) {
  if (dt_probes.size() < 2) {
    throw ValidationError("convergence study needs at least two probe steps");
  }
  for (std::size_t i = 1; i < dt_probes.size(); ++i) {
    if (!(dt_probes[i] < dt_probes[i - 1])) {
      throw ValidationError("convergence study probe steps must be strictly decreasing");
    }
  }
  std::vector<ResidualReport> reports;
  reports.reserve(dt_probes.size());
  for (double h : dt_probes) reports.push_back(residual_at(sampler, p, g, h, options));
  return reports;
}

ResidualReport time_shift_check(const Sampler& sampler, const MarketParams& p,
                                const SpaceTimeGrid& g, double t0, double dt_probe,
                                const ResidualOptions& options) {
  if (!std::isfinite(t0)) throw ValidationError("time shift must be finite");
  if (t0 == 0.0) return residual_at(sampler, p, g, dt_probe, options);
  Sampler shifted = [&sampler, t0](double s, double t) { return sampler(s, t + t0); };
  return residual_at(shifted, p, g, dt_probe, options);
}

}  // namespace finrogue
