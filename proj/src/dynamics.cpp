#include "finrogue/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "finrogue/error.hpp"
#include "finrogue/spectral.hpp"

namespace finrogue {

namespace {

void check_row(std::size_t n_s, double length) {
  if (!is_power_of_two(n_s)) throw ValidationError("simulation needs a power-of-two n_s");
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw ValidationError("simulation domain length must be positive");
  }
}

bool all_finite(const std::vector<Complex>& v) {
  return std::all_of(v.begin(), v.end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

// psi *= exp(i beta |psi|^2 tau), rotated in long double
void rotate_nonlinear(std::vector<Complex>& psi, double beta, double tau) {
  for (auto& z : psi) {
    const long double phase = static_cast<long double>(beta * std::norm(z) * tau);
    const long double c = std::cos(phase), s = std::sin(phase);
    const long double re = z.real(), im = z.imag();
    z = Complex(static_cast<double>(re * c - im * s), static_cast<double>(re * s + im * c));
  }
}

// Number of steps of size dt from t0 to t1; rejects non-integral counts.
std::size_t step_count(double t0, double t1, double dt) {
  if (!(dt != 0.0) || !std::isfinite(dt)) throw ValidationError("time step must be nonzero");
  const double q = (t1 - t0) / dt;
  const double rounded = std::round(q);
  if (!std::isfinite(q) || std::abs(q - rounded) > 1e-9 || rounded < 0.0) {
    std::ostringstream msg;
    msg << "(t_end - t_start)/dt = " << q << " is not a non-negative integer";
    throw ValidationError(msg.str());
  }
  return static_cast<std::size_t>(rounded);
}

double max_error(const SimState& state, const Sampler& reference) {
  double worst = 0.0;
  for (std::size_t j = 0; j < state.n_s(); ++j) {
    worst = std::max(worst, std::abs(state.samples[j] - reference(state.s_at(j), state.t_now)));
  }
  return worst;
}

WaveField snapshot_of(const SimState& state) {
  return WaveField{make_slice(state.s_min, state.length, state.n_s(), state.t_now),
                   state.samples, state.params, "snapshot"};
}

}  // namespace

SimState make_state(const Sampler& initial, const MarketParams& p, double s_min,
                    double length, std::size_t n_s, double t) {
  check_row(n_s, length);
  SimState state{std::vector<Complex>(n_s), t, p, s_min, length};
  for (std::size_t j = 0; j < n_s; ++j) state.samples[j] = initial(state.s_at(j), t);
  if (!all_finite(state.samples)) throw ValidationError("initial data is not finite");
  return state;
}

double conserved_mass(const SimState& state) {
  double sum = 0.0;
  for (const auto& z : state.samples) sum += std::norm(z);
  return state.ds() * sum;
}

struct SplitStepPropagator::Impl {
  MarketParams params;
  double length;
  double dt;
  Fft fft;
  std::vector<Complex> dispersion;  // exp(-i sigma/2 kappa^2 dt) / n
  std::vector<double> kappa;
  std::vector<Complex> work;

  Impl(const MarketParams& p, double len, std::size_t n, double step)
      : params(p), length(len), dt(step), fft(n), dispersion(n), kappa(wavenumbers(n, len)),
        work(n) {
    const double norm = 1.0 / static_cast<double>(n);
    for (std::size_t m = 0; m < n; ++m) {
      const double phase = -0.5 * p.sigma() * kappa[m] * kappa[m] * dt;
      dispersion[m] = Complex(std::cos(phase), std::sin(phase)) * norm;
    }
  }
};

SplitStepPropagator::SplitStepPropagator(const MarketParams& p, double length, std::size_t n_s,
                                         double dt) {
  check_row(n_s, length);
  if (!std::isfinite(dt)) throw ValidationError("time step must be finite");
  impl_ = std::make_unique<Impl>(p, length, n_s, dt);
}

SplitStepPropagator::~SplitStepPropagator() = default;
SplitStepPropagator::SplitStepPropagator(SplitStepPropagator&&) noexcept = default;
SplitStepPropagator& SplitStepPropagator::operator=(SplitStepPropagator&&) noexcept = default;

double SplitStepPropagator::dt() const noexcept { return impl_->dt; }

void SplitStepPropagator::step(SimState& state) {
  auto& m = *impl_;
  if (state.n_s() != m.fft.size()) throw ValidationError("state size does not match propagator");
  const double half = 0.5 * m.dt;
  rotate_nonlinear(state.samples, state.params.beta(), half);
  m.fft.forward(state.samples, state.samples);
  for (std::size_t k = 0; k < state.samples.size(); ++k) state.samples[k] *= m.dispersion[k];
  m.fft.backward(state.samples, state.samples);
  rotate_nonlinear(state.samples, state.params.beta(), half);
  state.t_now += m.dt;
  if (!all_finite(state.samples)) {
    std::ostringstream msg;
    msg << "field blew up (non-finite values) at t=" << state.t_now;
    throw NumericalError(msg.str());
  }
}

double SplitStepPropagator::hamiltonian(const SimState& state) {
  auto& m = *impl_;
  spectral_first_derivative(m.fft, state.samples, state.length, m.work);
  const double half_sigma = 0.5 * state.params.sigma();
  const double half_beta = 0.5 * state.params.beta();
  double sum = 0.0;
  for (std::size_t j = 0; j < state.samples.size(); ++j) {
    const double rho = std::norm(state.samples[j]);
    sum += half_sigma * std::norm(m.work[j]) - half_beta * rho * rho;
  }
  return state.ds() * sum;
}

std::vector<Complex> SplitStepPropagator::spectrum(const SimState& state) {
  std::vector<Complex> out(state.n_s());
  impl_->fft.forward(state.samples, out);
  const double norm = 1.0 / static_cast<double>(out.size());
  for (auto& z : out) z *= norm;
  return out;
}

double conserved_hamiltonian(const SimState& state) {
  SplitStepPropagator prop(state.params, state.length, state.n_s(), 0.0);
  return prop.hamiltonian(state);
}

SimState strang_step(const SimState& state, double dt) {
  if (dt == 0.0) throw ValidationError("time step must be nonzero");
  SimState next = state;
  SplitStepPropagator prop(state.params, state.length, state.n_s(), dt);
  prop.step(next);
  return next;
}

SimulationReport simulate(const SimState& initial, double t_end, double dt,
                          const std::optional<Sampler>& reference,
                          const std::vector<double>& snapshot_times,
                          const SimulateOptions& options) {
  check_row(initial.n_s(), initial.length);
  const double t0 = initial.t_now;
  const std::size_t steps = step_count(t0, t_end, dt);

  // step index -> positions in the requested snapshot list
  std::map<std::size_t, std::vector<std::size_t>> wanted;
  for (std::size_t k = 0; k < snapshot_times.size(); ++k) {
    const double q = (snapshot_times[k] - t0) / dt;
    const double idx = std::round(q);
    if (!std::isfinite(q) || std::abs(q - idx) > 1e-9 || idx < 0.0 ||
        idx > static_cast<double>(steps)) {
      std::ostringstream msg;
      msg << "snapshot time " << snapshot_times[k] << " is not on a step boundary of the run";
      throw ValidationError(msg.str());
    }
    wanted[static_cast<std::size_t>(idx)].push_back(k);
  }

  SimulationReport report;
  if (reference) {
    const auto& ref = *reference;
    report.boundary_value_jump =
        std::abs(ref(initial.s_min + initial.length, t0) - ref(initial.s_min, t0));
    if (report.boundary_value_jump > options.max_boundary_jump) {
      std::ostringstream msg;
      msg << "reference is not periodic on the domain: boundary jump "
          << report.boundary_value_jump << " exceeds " << options.max_boundary_jump;
      throw ValidationError(msg.str());
    }
  }

  std::vector<std::optional<WaveField>> snaps(snapshot_times.size());
  SplitStepPropagator prop(initial.params, initial.length, initial.n_s(), dt);
  SimState state = initial;

  auto record = [&](std::size_t i) {
    report.times.push_back(state.t_now);
    report.mass_trace.push_back(conserved_mass(state));
    report.hamiltonian_trace.push_back(prop.hamiltonian(state));
    if (reference) report.error_linf_vs_analytic.push_back(max_error(state, *reference));
    if (auto it = wanted.find(i); it != wanted.end()) {
      for (std::size_t k : it->second) snaps[k] = snapshot_of(state);
    }
  };

  auto finish = [&] {
    for (auto& s : snaps) {
      if (s) report.snapshots.push_back(std::move(*s));
    }
  };

  record(0);
  for (std::size_t i = 1; i <= steps; ++i) {
    try {
      prop.step(state);
    } catch (const NumericalError& e) {
      finish();
      throw BlowUpError(e.what(), std::move(report));
    }
    state.t_now = t0 + static_cast<double>(i) * dt;
    record(i);
  }
  finish();
  return report;
}

double mi_growth_rate(const MarketParams& p, double kappa) {
  const double a2 = background_amplitude(p) * background_amplitude(p);
  const double sigma = p.sigma();
  const double gain = sigma * p.beta() * a2 - 0.25 * sigma * sigma * kappa * kappa;
  return gain > 0.0 ? std::abs(kappa) * std::sqrt(gain) : 0.0;
}

MiResult mi_scenario(const MarketParams& p, double length, std::size_t n_s, double eps,
                     std::size_t m_pert, double t_end, double dt, std::uint64_t rng_seed) {
  check_row(n_s, length);
  const double amplitude = background_amplitude(p);
  if (!(eps >= 0.0) || eps > 1e-3 * std::abs(amplitude)) {
    throw ValidationError("mi perturbation eps must lie in [0, 1e-3*|A|]");
  }
  if (m_pert == 0 || m_pert >= n_s / 2) {
    throw ValidationError("mi perturbation mode must satisfy 0 < m < n_s/2");
  }
  if (!(t_end > 0.0) || !(dt > 0.0)) throw ValidationError("mi needs t_end > 0 and dt > 0");
  const std::size_t steps = step_count(0.0, t_end, dt);

  MiResult result;
  result.kappa = 2.0 * std::numbers::pi * static_cast<double>(m_pert) / length;
  result.oracle_rate = mi_growth_rate(p, result.kappa);

  std::mt19937_64 gen(rng_seed);
  result.phase_offset =
      2.0 * std::numbers::pi * static_cast<double>(gen() >> 11) * 0x1.0p-53;

  const double kappa = result.kappa;
  const double theta = result.phase_offset;
  SimState state = make_state(
      [&](double s, double) { return Complex(amplitude * (1.0 + eps * std::cos(kappa * s + theta))); },
      p, 0.0, length, n_s, 0.0);

  SplitStepPropagator prop(p, length, n_s, dt);
  auto& report = result.report;
  auto record = [&](std::size_t i) {
    state.t_now = static_cast<double>(i) * dt;
    report.times.push_back(state.t_now);
    report.mass_trace.push_back(conserved_mass(state));
    report.hamiltonian_trace.push_back(prop.hamiltonian(state));
    const auto spec = prop.spectrum(state);
    result.mode_times.push_back(state.t_now);
    result.mode_amplitude.push_back(std::abs(spec[m_pert]) + std::abs(spec[n_s - m_pert]));
    for (std::size_t m = 1; m < n_s; ++m) {
      result.max_sideband = std::max(result.max_sideband, std::abs(spec[m]));
    }
  };

  record(0);
  for (std::size_t i = 1; i <= steps; ++i) {
    try {
      prop.step(state);
    } catch (const NumericalError& e) {
      throw BlowUpError(e.what(), std::move(report));
    }
    record(i);
  }

  if (eps == 0.0) return result;

  const auto& amp = result.mode_amplitude;
  const double saturation = 0.1 * std::abs(amplitude);
  std::size_t end = amp.size();
  for (std::size_t i = 0; i < amp.size(); ++i) {
    if (amp[i] >= saturation) {
      end = i;
      break;
    }
  }
  const std::size_t begin = end / 2;
  constexpr std::size_t min_points = 8;
  if (end < begin + min_points) {
    throw NumericalError("mi growth fit window not found (mode saturated immediately)");
  }

  // least-squares slope of log(amplitude) against time
  double st = 0.0, sy = 0.0;
  const auto count = static_cast<double>(end - begin);
  for (std::size_t i = begin; i < end; ++i) {
    st += result.mode_times[i];
    sy += std::log(amp[i]);
  }
  const double t_mean = st / count, y_mean = sy / count;
  double stt = 0.0, sty = 0.0;
  for (std::size_t i = begin; i < end; ++i) {
    const double dt_i = result.mode_times[i] - t_mean;
    stt += dt_i * dt_i;
    sty += dt_i * (std::log(amp[i]) - y_mean);
  }
  result.fitted_rate = sty / stt;
  result.fit_t_begin = result.mode_times[begin];
  result.fit_t_end = result.mode_times[end - 1];
  return result;
}

}  // namespace finrogue
