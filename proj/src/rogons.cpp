#include "finrogue/rogons.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>
#include <vector>

#include "finrogue/error.hpp"

namespace finrogue {

namespace {

Complex carrier(const MarketParams& p, double s, double t) noexcept {
  const double phase = carrier_phase(p, s, t);
  return {std::cos(phase), std::sin(phase)};
}

}  // namespace

std::string_view to_string(Solution which) noexcept {
  switch (which) {
    case Solution::plane: return "plane";
    case Solution::rogon1: return "rogon1";
    case Solution::rogon2: return "rogon2";
  }
  return "unknown";
}

std::optional<Solution> parse_solution(std::string_view name) noexcept {
  if (name == "plane") return Solution::plane;
  if (name == "rogon1") return Solution::rogon1;
  if (name == "rogon2") return Solution::rogon2;
  return std::nullopt;
}

double carrier_phase(const MarketParams& p, double s, double t) noexcept {
  const double k = p.k();
  const double alpha = p.alpha();
  return k * s + 0.5 * p.sigma() * (alpha * alpha - k * k) * t;
}

Complex plane_wave(const MarketParams& p, double s, double t) noexcept {
  return background_amplitude(p) * carrier(p, s, t);
}

Complex rogon1(const MarketParams& p, double s, double t) noexcept {
  const double sigma = p.sigma();
  const double a2 = p.alpha() * p.alpha();
  const double xi = s - sigma * p.k() * t;
  const double st = sigma * a2 * t;  // sigma alpha^2 t
  const double denom = 1.0 + 2.0 * a2 * xi * xi + st * st;
  const Complex bracket(1.0 - 4.0 / denom, -4.0 * st / denom);
  return background_amplitude(p) * bracket * carrier(p, s, t);
}

PolynomialTriple rogon2_polynomials(const MarketParams& p, double s, double t) noexcept {
  const double sigma = p.sigma();
  const double a2 = p.alpha() * p.alpha();
  const double xi = s - sigma * p.k() * t;
  const double st = sigma * a2 * t;
  const double X = a2 * xi * xi;
  const double T = st * st;

  const double p2 = (3.0 / 8.0 - (9.0 / 4.0) * T - (5.0 / 8.0) * T * T) +
                    X * (-1.5 - 1.5 * T - 0.5 * X);
  const double q2 = -0.5 * st *
                    ((-15.0 / 4.0 + 0.5 * T + 0.25 * T * T) + X * (-3.0 + T + X));
  const double r2 = (3.0 / 32.0 + T * (33.0 / 32.0 + T * (9.0 / 32.0 + T / 96.0))) +
                    X * ((9.0 / 16.0 + T * (-3.0 / 8.0 + T / 16.0)) +
                         X * ((1.0 / 8.0 + T / 8.0) + X / 12.0));
  return {p2, q2, r2};
}

Complex rogon2(const MarketParams& p, double s, double t) {
  const auto [p2, q2, r2] = rogon2_polynomials(p, s, t);
  if (!(r2 > 1e-300)) {
    std::ostringstream msg;
    msg << "two-rogon denominator R2 = " << r2 << " is not positive at S=" << s
        << ", t=" << t;
    throw NumericalError(msg.str());
  }
  const Complex bracket(1.0 + p2 / r2, q2 / r2);
  return background_amplitude(p) * bracket * carrier(p, s, t);
}

Complex evaluate(Solution which, const MarketParams& p, double s, double t) {
  switch (which) {
    case Solution::plane: return plane_wave(p, s, t);
    case Solution::rogon1: return rogon1(p, s, t);
    case Solution::rogon2: return rogon2(p, s, t);
  }
  throw ValidationError("unknown solution tag");
}

Sampler make_sampler(Solution which, const MarketParams& p) {
  return [which, p](double s, double t) { return evaluate(which, p, s, t); };
}

WaveField eval_field(Solution which, const MarketParams& p, const SpaceTimeGrid& g,
                     unsigned workers) {
  WaveField field{g, std::vector<Complex>(g.size()), p, std::string(to_string(which))};

  auto fill_rows = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double t = g.t_at(i);
      for (std::size_t j = 0; j < g.n_s; ++j) {
        field.samples[i * g.n_s + j] = evaluate(which, p, g.s_at(j), t);
      }
    }
  };

  const std::size_t nworkers = std::clamp<std::size_t>(workers, 1, g.n_t);
  if (nworkers == 1) {
    fill_rows(0, g.n_t);
    return field;
  }

  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(nworkers);
  const std::size_t chunk = (g.n_t + nworkers - 1) / nworkers;
  for (std::size_t w = 0; w < nworkers; ++w) {
    const std::size_t begin = std::min(g.n_t, w * chunk);
    const std::size_t end = std::min(g.n_t, begin + chunk);
    pool.emplace_back([&, w, begin, end] {
      try {
        fill_rows(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return field;
}

PeakStatistics peak_statistics(const WaveField& field) {
  if (field.samples.empty()) throw ValidationError("peak statistics of an empty field");
  if (field.samples.size() != field.grid.size()) {
    throw ValidationError("wave field sample count does not match its grid");
  }
  const auto& g = field.grid;
  PeakStatistics best{std::norm(field.samples[0]), g.s_at(0), g.t_at(0), 0, 0};
  for (std::size_t i = 0; i < g.n_t; ++i) {
    for (std::size_t j = 0; j < g.n_s; ++j) {
      const double intensity = std::norm(field.at(i, j));
      if (intensity > best.max_intensity) {
        best = {intensity, g.s_at(j), g.t_at(i), i, j};
      }
    }
  }
  return best;
}

}  // namespace finrogue
