#include <doctest.h>

#include <array>
#include <cmath>

#include "finrogue/error.hpp"
#include "finrogue/rogons.hpp"
#include "finrogue/verify.hpp"

using namespace finrogue;

namespace {

const auto kFig1 = make_params(0.3, 0.03, 2.0, 0.0);
const auto kFig2 = make_params(0.3, 0.03, 0.8, 0.0);
const auto kWide = make_grid(-60.0, 60.0, 4096, -3.0, 3.0, 7);

}  // namespace

TEST_CASE("residual of a Gaussian matches its closed-form residual") {
  // psi = exp(-S^2 + i t) is not a solution; its residual is known exactly:
  // R = psi * [-1 + (sigma/2)(4 S^2 - 2) + beta exp(-2 S^2)]
  const auto p = make_params(0.3, 0.03, 2.0, 0.0);
  const Sampler gauss = [](double s, double t) { return std::polar(std::exp(-s * s), t); };
  const auto g = make_grid(-8.0, 8.0, 256, -1.0, 1.0, 5);
  double linf = 0.0, l2 = 0.0;
  for (std::size_t i = 0; i < g.n_t; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < g.n_s; ++j) {
      const double s = g.s_at(j);
      const double r = std::exp(-s * s) *
                       std::abs(-1.0 + 0.15 * (4 * s * s - 2) + 0.03 * std::exp(-2 * s * s));
      linf = std::max(linf, r);
      sum += r * r;
    }
    l2 = std::max(l2, std::sqrt(g.ds() * sum));
  }
  for (auto boundary : {BoundaryTreatment::periodic, BoundaryTreatment::jump_corrected}) {
    const auto rep = residual_at(gauss, p, g, 1e-3, {boundary, 1});
    CHECK(rep.linf == doctest::Approx(linf).epsilon(1e-9));
    CHECK(rep.l2 == doctest::Approx(l2).epsilon(1e-9));
  }
}

TEST_CASE("plane waves have a negligible residual") {
  const auto g = make_grid(-8.0, 8.0, 256, -3.0, 3.0, 7);
  const auto rep = residual_at(make_sampler(Solution::plane, kFig1), kFig1, g, 1e-3);
  CHECK(rep.linf <= 1e-9);
  CHECK(rep.n_s == 256);
  CHECK(rep.n_t == 7);

  // a gauge that fits the period keeps the row periodic
  const auto moving = kFig1.with_gauge(admissible_gauge(-1.5, g.length()));
  const auto rep2 = residual_at(make_sampler(Solution::plane, moving), moving, g, 1e-3,
                                {BoundaryTreatment::periodic, 1});
  CHECK(rep2.linf <= 1e-9);
  CHECK(rep2.value_jump <= 1e-12);
}

TEST_CASE("rogon residuals on the wide grid") {
  const auto r1 = residual_at(make_sampler(Solution::rogon1, kFig1), kFig1, kWide, 1e-3);
  const auto r2 = residual_at(make_sampler(Solution::rogon2, kFig2), kFig2, kWide, 1e-3);
  CHECK(r1.linf <= 1e-6);
  CHECK(r2.linf <= 1e-6);
  CHECK(r1.dt_probe == 1e-3);

  // the plain periodic derivative sees the slope jump at the wrap
  const ResidualOptions periodic{BoundaryTreatment::periodic, 1};
  const auto p1 = residual_at(make_sampler(Solution::rogon1, kFig1), kFig1, kWide, 1e-3, periodic);
  CHECK(p1.linf > 100.0 * r1.linf);
  CHECK(p1.slope_jump > 0.0);
}

TEST_CASE("a perturbed candidate is rejected") {
  for (auto [which, p] : {std::pair{Solution::rogon1, kFig1}, std::pair{Solution::rogon2, kFig2}}) {
    const auto exact = make_sampler(which, p);
    const Sampler scaled = [exact](double s, double t) { return 1.01 * exact(s, t); };
    const auto good = residual_at(exact, p, kWide, 1e-3);
    const auto bad = residual_at(scaled, p, kWide, 1e-3);
    CHECK(bad.linf >= 1e3 * good.linf);
    CHECK(bad.linf > 1e-6);
  }
}

TEST_CASE("fourth-order convergence in the time probe") {
  const std::array<double, 3> probes1{4e-3, 2e-3, 1e-3};
  const auto s1 = convergence_study(make_sampler(Solution::rogon1, kFig1), kFig1, kWide, probes1);
  REQUIRE(s1.size() == 3);
  for (std::size_t i = 1; i < s1.size(); ++i) {
    const double ratio = s1[i - 1].linf / s1[i].linf;
    CHECK(ratio >= 8.0);
    CHECK(ratio <= 24.0);
  }
  // the two-rogon field reaches roundoff sooner; larger probes show the rate
  const std::array<double, 3> probes2{0.05, 0.025, 0.0125};
  const auto s2 = convergence_study(make_sampler(Solution::rogon2, kFig2), kFig2, kWide, probes2);
  for (std::size_t i = 1; i < s2.size(); ++i) {
    const double ratio = s2[i - 1].linf / s2[i].linf;
    CHECK(ratio >= 8.0);
    CHECK(ratio <= 24.0);
  }
}

TEST_CASE("refining S does not degrade the residual beyond roundoff") {
  const auto sampler = make_sampler(Solution::rogon1, kFig1);
  const auto coarse = residual_at(sampler, kFig1, make_grid(-60.0, 60.0, 2048, -3.0, 3.0, 7), 1e-3);
  const auto fine = residual_at(sampler, kFig1, make_grid(-60.0, 60.0, 4096, -3.0, 3.0, 7), 1e-3);
  CHECK(fine.linf <= std::max(coarse.linf, 1e-9));
}

TEST_CASE("time-translated rogons stay solutions") {
  for (auto [which, p] : {std::pair{Solution::rogon1, kFig1}, std::pair{Solution::rogon2, kFig2}}) {
    const auto sampler = make_sampler(which, p);
    for (double t0 : {0.0, 1.7, -2.5, 10.0}) {
      const auto rep = time_shift_check(sampler, p, kWide, t0);
      CHECK(rep.linf <= 1e-6);
    }
    CHECK(time_shift_check(sampler, p, kWide, 0.0) == residual_at(sampler, p, kWide, 1e-3));
  }
}

TEST_CASE("residual is independent of the worker count") {
  const auto sampler = make_sampler(Solution::rogon2, kFig2);
  const auto g = make_grid(-60.0, 60.0, 1024, -3.0, 3.0, 13);
  const auto one = residual_at(sampler, kFig2, g, 1e-3, {BoundaryTreatment::jump_corrected, 1});
  for (unsigned w : {2u, 4u, 16u}) {
    CHECK(residual_at(sampler, kFig2, g, 1e-3, {BoundaryTreatment::jump_corrected, w}) == one);
  }
}

TEST_CASE("residual argument checks") {
  const auto sampler = make_sampler(Solution::rogon1, kFig1);
  CHECK_THROWS_AS(residual_at(sampler, kFig1, make_grid(-8.0, 8.0, 100, 0.0, 1.0, 2), 1e-3),
                  ValidationError);
  CHECK_THROWS_AS(residual_at(sampler, kFig1, make_grid(-8.0, 8.0, 4, 0.0, 1.0, 2), 1e-3),
                  ValidationError);
  CHECK_THROWS_AS(residual_at(sampler, kFig1, make_grid(-8.0, 8.0, 64, 0.0, 1.0, 2), 0.0),
                  ValidationError);
  CHECK_THROWS_AS(residual_at(sampler, kFig1, make_grid(-8.0, 8.0, 64, 0.0, 1.0, 2), -1e-3),
                  ValidationError);
  const auto g = make_grid(-8.0, 8.0, 64, 0.0, 1.0, 2);
  const std::array<double, 1> single{1e-3};
  const std::array<double, 2> rising{1e-3, 2e-3};
  CHECK_THROWS_AS(convergence_study(sampler, kFig1, g, single), ValidationError);
  CHECK_THROWS_AS(convergence_study(sampler, kFig1, g, rising), ValidationError);
  const Sampler broken = [](double, double) { return Complex(std::nan(""), 0.0); };
  CHECK_THROWS_AS(residual_at(broken, kFig1, g, 1e-3), NumericalError);
}
