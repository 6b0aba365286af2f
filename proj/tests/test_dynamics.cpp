#include <doctest.h>

#include <cmath>
#include <numbers>

#include "finrogue/dynamics.hpp"
#include "finrogue/error.hpp"
#include "finrogue/rogons.hpp"
#include "oracles.hpp"

using namespace finrogue;

namespace {

const auto kUnit = make_params(2.0, 1.0, 1.0, 0.0);
const auto kFig1 = make_params(0.3, 0.03, 2.0, 0.0);
const auto kFig2 = make_params(0.3, 0.03, 0.8, 0.0);

double max_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double worst = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::abs(a[j] - b[j]));
  return worst;
}

bool same_bits(const SimulationReport& a, const SimulationReport& b) {
  return a.times == b.times && a.mass_trace == b.mass_trace &&
         a.hamiltonian_trace == b.hamiltonian_trace &&
         a.error_linf_vs_analytic == b.error_linf_vs_analytic;
}

}  // namespace

TEST_CASE("mass") {
  const auto flat = make_state(make_sampler(Solution::plane, kUnit), kUnit, -40.0, 80.0, 64, 0.0);
  CHECK(conserved_mass(flat) == doctest::Approx(80.0).epsilon(1e-14));
  const auto flat2 = make_state(make_sampler(Solution::plane, kUnit), kUnit, -40.0, 80.0, 1024, 0.0);
  CHECK(conserved_mass(flat2) == doctest::Approx(80.0).epsilon(1e-14));
  const auto zero = make_state([](double, double) { return Complex(0.0); }, kUnit, 0.0, 10.0, 32, 0.0);
  CHECK(conserved_mass(zero) == 0.0);

  // rogon data: the Riemann sum agrees with adaptive quadrature of |psi|^2
  const auto sampler = make_sampler(Solution::rogon1, kFig1);
  const auto state = make_state(sampler, kFig1, -60.0, 120.0, 4096, -3.0);
  auto density = [&](double s) { return std::norm(sampler(s, -3.0)); };
  const double quad =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(density, -60.0, 60.0, 20, 1e-14);
  CHECK(conserved_mass(state) == doctest::Approx(quad).epsilon(1e-9));
}

TEST_CASE("hamiltonian") {
  const auto flat = make_state(make_sampler(Solution::plane, kUnit), kUnit, -40.0, 80.0, 256, 0.0);
  CHECK(conserved_hamiltonian(flat) == doctest::Approx(-40.0).epsilon(1e-13));
  const auto zero = make_state([](double, double) { return Complex(0.0); }, kUnit, 0.0, 10.0, 32, 0.0);
  CHECK(conserved_hamiltonian(zero) == 0.0);

  // kinetic part of a single mode: (sigma/2) k^2 L
  const double k = admissible_gauge(0.7, 80.0);
  const auto moving = kUnit.with_gauge(k);
  const auto wave = make_state(make_sampler(Solution::plane, moving), moving, -40.0, 80.0, 256, 0.0);
  CHECK(conserved_hamiltonian(wave) == doctest::Approx(k * k * 80.0 - 40.0).epsilon(1e-12));

  // the quartic term is linear in beta
  const auto sampler = make_sampler(Solution::rogon1, kFig1);
  auto state = make_state(sampler, kFig1, -30.0, 60.0, 512, -0.5);
  const double h1 = conserved_hamiltonian(state);
  state.params = MarketParams::unchecked(0.3, 0.0, 2.0, 0.0);
  const double kinetic = conserved_hamiltonian(state);
  state.params = MarketParams::unchecked(0.3, 0.06, 2.0, 0.0);
  const double h2 = conserved_hamiltonian(state);
  CHECK((h2 - kinetic) == doctest::Approx(2.0 * (h1 - kinetic)).epsilon(1e-12));
}

TEST_CASE("one step on single Fourier modes") {
  // nonlinear rotation by beta A^2 dt, dispersion by (sigma/2) k^2 dt
  const auto flat = make_state(make_sampler(Solution::plane, kUnit), kUnit, -40.0, 80.0, 256, 0.0);
  const auto next = strang_step(flat, 1e-3);
  CHECK(next.t_now == 1e-3);
  double worst = 0.0;
  for (const auto& z : next.samples) worst = std::max(worst, std::abs(z - std::polar(1.0, 1e-3)));
  CHECK(worst <= 1e-12);

  const double k = admissible_gauge(1.3, 80.0);
  const auto linear = MarketParams::unchecked(2.0, 0.0, 1.0, k);
  const auto mode = make_state([k](double s, double) { return std::polar(1.0, k * s); }, linear,
                               -40.0, 80.0, 256, 0.0);
  auto after = mode;
  SplitStepPropagator prop(linear, 80.0, 256, 0.01);
  for (int i = 0; i < 10; ++i) prop.step(after);
  worst = 0.0;
  for (std::size_t j = 0; j < after.n_s(); ++j) {
    const Complex expected = std::polar(1.0, k * mode.s_at(j) - k * k * 0.1);
    worst = std::max(worst, std::abs(after.samples[j] - expected));
  }
  CHECK(worst <= 1e-12);

  const auto moving = kUnit.with_gauge(k);
  const auto wave = make_state(make_sampler(Solution::plane, moving), moving, -40.0, 80.0, 256, 0.5);
  const auto stepped = strang_step(wave, 1e-3);
  const auto exact = make_state(make_sampler(Solution::plane, moving), moving, -40.0, 80.0, 256, 0.501);
  CHECK(max_diff(stepped.samples, exact.samples) <= 1e-12);
}

TEST_CASE("a step preserves mass") {
  const auto state = make_state(make_sampler(Solution::rogon1, kFig1), kFig1, -60.0, 120.0, 4096, -3.0);
  const double m0 = conserved_mass(state);
  auto next = strang_step(state, 1e-3);
  CHECK(std::abs(conserved_mass(next) - m0) / m0 <= 1e-14);
  next = strang_step(next, -2.5e-2);
  CHECK(std::abs(conserved_mass(next) - m0) / m0 <= 1e-14);
}

TEST_CASE("plane-wave simulation tracks the exact solution") {
  const auto sampler = make_sampler(Solution::plane, kFig1);
  const auto init = make_state(sampler, kFig1, -60.0, 120.0, 512, -3.0);
  const auto rep = simulate(init, 3.0, 1e-3, sampler, {});
  REQUIRE(rep.times.size() == 6001);
  CHECK(rep.times.back() == doctest::Approx(3.0).epsilon(1e-15));
  double worst = 0.0;
  for (double e : rep.error_linf_vs_analytic) worst = std::max(worst, e);
  CHECK(worst <= 1e-10);
  CHECK(rep.mass_trace.size() == rep.times.size());
  CHECK(rep.hamiltonian_trace.size() == rep.times.size());
  CHECK(rep.error_linf_vs_analytic.size() == rep.times.size());
  for (double m : rep.mass_trace) CHECK(std::abs(m - rep.mass_trace[0]) <= 1e-12 * rep.mass_trace[0]);
}

TEST_CASE("snapshots") {
  const auto sampler = make_sampler(Solution::rogon1, kFig1);
  const auto init = make_state(sampler, kFig1, -30.0, 60.0, 256, -1.0);
  const auto rep = simulate(init, 1.0, 0.01, std::nullopt, {0.5, -1.0, 1.0, 0.5});
  REQUIRE(rep.snapshots.size() == 4);
  CHECK(rep.snapshots[0].grid.t_min == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(rep.snapshots[1].samples == init.samples);
  CHECK(rep.snapshots[0].samples == rep.snapshots[3].samples);
  CHECK(rep.snapshots[2].grid.n_s == 256);
  CHECK(rep.error_linf_vs_analytic.empty());
}

TEST_CASE("simulation argument checks") {
  const auto sampler = make_sampler(Solution::rogon1, kFig1);
  const auto init = make_state(sampler, kFig1, -30.0, 60.0, 256, -1.0);
  CHECK_THROWS_AS(simulate(init, 0.0, 0.3, std::nullopt, {}), ValidationError);
  CHECK_THROWS_AS(simulate(init, 0.0, 0.0, std::nullopt, {}), ValidationError);
  CHECK_THROWS_AS(simulate(init, -2.0, 0.1, std::nullopt, {}), ValidationError);
  CHECK_THROWS_AS(simulate(init, 0.0, 0.1, std::nullopt, {0.05}), ValidationError);
  CHECK_THROWS_AS(simulate(init, 0.0, 0.1, std::nullopt, {0.5}), ValidationError);
  // a lopsided window cuts the background at different phases
  const auto skewed = make_state(sampler, kFig1, -5.0, 20.1, 256, -1.0);
  CHECK_THROWS_AS(simulate(skewed, 0.0, 0.1, sampler, {}), ValidationError);
  CHECK_NOTHROW(simulate(skewed, 0.0, 0.1, std::nullopt, {}));
  CHECK_THROWS_AS(make_state(sampler, kFig1, 0.0, 10.0, 100, 0.0), ValidationError);
  CHECK_THROWS_AS(make_state(sampler, kFig1, 0.0, 0.0, 64, 0.0), ValidationError);
  CHECK_THROWS_AS(strang_step(init, 0.0), ValidationError);
}

TEST_CASE("blow-up keeps the partial report") {
  const auto init =
      make_state([](double, double) { return Complex(1e200, 0.0); }, kUnit, 0.0, 10.0, 16, 0.0);
  try {
    simulate(init, 1.0, 0.1, std::nullopt, {});
    FAIL("expected blow-up");
  } catch (const BlowUpError& e) {
    CHECK(e.partial().times.size() == 1);
    CHECK(e.partial().times[0] == 0.0);
    CHECK(std::string(e.what()).find("blew up") != std::string::npos);
  }
  CHECK_THROWS_AS(strang_step(init, 0.1), NumericalError);
}

TEST_CASE("integration is reversible") {
  const auto sampler = make_sampler(Solution::rogon1, kFig1);
  const auto init = make_state(sampler, kFig1, -60.0, 120.0, 1024, -3.0);
  SplitStepPropagator fwd(kFig1, 120.0, 1024, 1e-3), back(kFig1, 120.0, 1024, -1e-3);
  auto state = init;
  for (int i = 0; i < 3000; ++i) fwd.step(state);
  CHECK(state.t_now == doctest::Approx(0.0).epsilon(1e-9));
  for (int i = 0; i < 3000; ++i) back.step(state);
  CHECK(max_diff(state.samples, init.samples) <= 1e-8);
}

TEST_CASE("second-order convergence in dt") {
  // a wide window keeps the truncated background tail below the splitting error
  const auto sampler = make_sampler(Solution::rogon1, kFig1);
  const auto init = make_state(sampler, kFig1, -240.0, 480.0, 8192, -3.0);
  const auto coarse = simulate(init, 3.0, 8e-3, sampler, {});
  const auto fine = simulate(init, 3.0, 4e-3, sampler, {});
  const double ratio = coarse.error_linf_vs_analytic.back() / fine.error_linf_vs_analytic.back();
  CHECK(ratio >= 3.2);
  CHECK(ratio <= 4.8);
}

TEST_CASE("two-rogon self-validation run") {
  const auto sampler = make_sampler(Solution::rogon2, kFig2);
  const auto init = make_state(sampler, kFig2, -60.0, 120.0, 4096, -3.0);
  const auto rep = simulate(init, 3.0, 5e-4, sampler, {});
  CHECK(rep.error_linf_vs_analytic.back() <= 5e-4);
  const double m0 = rep.mass_trace.front();
  for (double m : rep.mass_trace) CHECK(std::abs(m - m0) <= 1e-12 * m0);
}

TEST_CASE("simulation is deterministic") {
  const auto sampler = make_sampler(Solution::rogon2, kFig2);
  const auto init = make_state(sampler, kFig2, -60.0, 120.0, 1024, -1.0);
  const auto a = simulate(init, 0.0, 1e-2, sampler, {0.0});
  const auto b = simulate(init, 0.0, 1e-2, sampler, {0.0});
  CHECK(same_bits(a, b));
  CHECK(a.snapshots[0].samples == b.snapshots[0].samples);
}

TEST_CASE("modulation growth rate against the linearized system") {
  const double a = background_amplitude(kFig1);
  for (double kappa : {0.25, 0.8, 1.5, 2.0, 2.5, 2.8}) {
    const double rk4 = oracle::mi_rate_by_integration(0.3, 0.03, a, kappa, 60.0);
    CHECK(mi_growth_rate(kFig1, kappa) == doctest::Approx(rk4).epsilon(1e-3));
  }
  for (double kappa : {2.9, 3.5, 6.0}) {
    CHECK(mi_growth_rate(kFig1, kappa) == 0.0);
    CHECK(std::abs(oracle::mi_rate_by_integration(0.3, 0.03, a, kappa, 200.0)) < 1e-2);
  }
  // maximum sigma alpha^2 / 2 at kappa = alpha, cutoff at sqrt(2) alpha
  CHECK(mi_growth_rate(kFig1, 2.0) == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(mi_growth_rate(kFig1, 1.99) < 0.6);
  CHECK(mi_growth_rate(kFig1, 2.01) < 0.6);
  CHECK(mi_growth_rate(kFig1, 2.0 * std::sqrt(2.0) - 1e-9) < 1e-3);
  for (double alpha : {0.5, 1.0, 3.0}) {
    const auto p = make_params(0.7, 0.2, alpha, 0.0);
    CHECK(mi_growth_rate(p, alpha) == doctest::Approx(0.35 * alpha * alpha).epsilon(1e-13));
  }
}

TEST_CASE("modulation instability scenario") {
  const double length = 4.0 * std::numbers::pi;

  const auto gain = mi_scenario(kFig1, length, 256, 1e-3, 4, 20.0, 1e-3, 7);
  CHECK(gain.kappa == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(gain.oracle_rate == doctest::Approx(0.6).epsilon(1e-14));
  REQUIRE(gain.fitted_rate.has_value());
  CHECK(std::abs(*gain.fitted_rate - 0.6) <= 0.06);
  CHECK(gain.fit_t_end > gain.fit_t_begin);
  CHECK(gain.mode_times.size() == gain.mode_amplitude.size());

  const auto stable = mi_scenario(kFig1, length, 256, 1e-3, 7, 40.0, 1e-3, 7);
  CHECK(stable.oracle_rate == 0.0);
  REQUIRE(stable.fitted_rate.has_value());
  CHECK(std::abs(*stable.fitted_rate) <= 0.05 * 0.6);

  const auto quiet = mi_scenario(kFig1, length, 256, 0.0, 4, 5.0, 1e-3, 7);
  CHECK_FALSE(quiet.fitted_rate.has_value());
  CHECK(quiet.max_sideband <= 1e-10);

  const auto again = mi_scenario(kFig1, length, 256, 1e-3, 4, 2.0, 1e-3, 7);
  const auto same = mi_scenario(kFig1, length, 256, 1e-3, 4, 2.0, 1e-3, 7);
  const auto other = mi_scenario(kFig1, length, 256, 1e-3, 4, 2.0, 1e-3, 8);
  CHECK(again.mode_amplitude == same.mode_amplitude);
  CHECK(again.phase_offset == same.phase_offset);
  CHECK(again.phase_offset != other.phase_offset);
  CHECK(again.phase_offset >= 0.0);
  CHECK(again.phase_offset < 2.0 * std::numbers::pi);

  CHECK_THROWS_AS(mi_scenario(kFig1, length, 256, 1e-2, 4, 1.0, 1e-3, 7), ValidationError);
  CHECK_THROWS_AS(mi_scenario(kFig1, length, 256, -1e-6, 4, 1.0, 1e-3, 7), ValidationError);
  CHECK_THROWS_AS(mi_scenario(kFig1, length, 256, 1e-3, 0, 1.0, 1e-3, 7), ValidationError);
  CHECK_THROWS_AS(mi_scenario(kFig1, length, 256, 1e-3, 128, 1.0, 1e-3, 7), ValidationError);
  CHECK_THROWS_AS(mi_scenario(kFig1, length, 256, 1e-3, 4, 1.0, 0.3, 7), ValidationError);
}
