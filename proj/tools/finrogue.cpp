// finrogue: closed-form rogue waves of the nonlinear option-pricing wave
// equation, their PDE residuals, split-step propagation and the
// Black-Scholes baseline.
//
// Exit codes: 0 success, 1 invalid input, 2 numerical failure.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "finrogue/bs_baseline.hpp"
#include "finrogue/config.hpp"
#include "finrogue/dynamics.hpp"
#include "finrogue/error.hpp"
#include "finrogue/export.hpp"
#include "finrogue/rogons.hpp"
#include "finrogue/verify.hpp"

namespace fs = std::filesystem;
using namespace finrogue;

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kNumerical = 2;

struct CommonOptions {
  std::string config;
  std::string preset;
  std::vector<std::string> overrides;
  std::string output = ".";
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config, "Scenario file (key = value lines)");
  cmd->add_option("--preset", opts.preset, "Built-in scenario (see `presets`)");
  cmd->add_option("--set", opts.overrides, "Override key=value, applied in order after the file")
      ->take_all();
  cmd->add_option("--output", opts.output, "Directory for CSV/image/report artifacts");
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ScenarioConfig load(const CommonOptions& opts, std::string_view default_preset) {
  if (!opts.config.empty() && !opts.preset.empty()) {
    throw ValidationError("use either --config or --preset, not both");
  }
  std::string text;
  if (!opts.config.empty()) {
    text = read_file(opts.config);
  } else {
    text = std::string(preset_text(opts.preset.empty() ? default_preset : opts.preset));
  }
  RawConfig raw = parse_raw(text);
  for (const auto& o : opts.overrides) apply_override(raw, o);
  return build_config(raw);
}

fs::path output_dir(const CommonOptions& opts) {
  fs::path dir(opts.output);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

void write_text(const fs::path& path, const std::string& text) { write_bytes(path, text); }

Solution require_solution(const ScenarioConfig& cfg, std::string_view command) {
  const auto sol = as_solution(cfg.solution);
  if (!sol) {
    throw ValidationError(std::string(command) + " needs solution = plane, rogon1 or rogon2 (got " +
                          std::string(to_string(cfg.solution)) + ")");
  }
  return *sol;
}

void require_kind(const ScenarioConfig& cfg, ScenarioKind kind, std::string_view command) {
  if (cfg.solution != kind) {
    throw ValidationError(std::string(command) + " needs solution = " +
                          std::string(to_string(kind)) + " (got " +
                          std::string(to_string(cfg.solution)) + ")");
  }
}

// Gauge admissible on the periodic domain; reports the substitution.
MarketParams periodic_params(const MarketParams& p, double length) {
  const double k = admissible_gauge(p.k(), length);
  if (k != p.k()) {
    std::cout << "gauge k = " << format_number(p.k()) << " is not periodic on L = "
              << format_number(length) << "; using nearest admissible k = " << format_number(k)
              << '\n';
  }
  return p.with_gauge(k);
}

int write_heatmap(const WaveField& field, const ScenarioConfig& cfg, const fs::path& dir) {
  try {
    write_bytes(dir / cfg.output.image, render_heatmap(field, cfg.render));
  } catch (const ValidationError& e) {
    std::cerr << "heatmap not written: " << e.what() << '\n';
    return kInvalid;
  }
  std::cout << "wrote " << (dir / cfg.output.image).string() << '\n';
  return kOk;
}

int run_eval(const CommonOptions& opts, bool csv) {
  const auto cfg = load(opts, "fig1a");
  const auto sol = require_solution(cfg, csv ? "eval" : "render");
  const auto field = eval_field(sol, *cfg.params, *cfg.grid, cfg.workers);
  const auto peak = peak_statistics(field);
  std::cout << to_string(sol) << ": max |psi|^2 = " << format_number(peak.max_intensity)
            << " at S = " << format_number(peak.s_at) << ", t = " << format_number(peak.t_at)
            << " (background A^2 = "
            << format_number(std::pow(background_amplitude(*cfg.params), 2)) << ")\n";
  const auto dir = output_dir(opts);
  if (csv) {
    write_csv(field, dir / cfg.output.csv);
    std::cout << "wrote " << (dir / cfg.output.csv).string() << '\n';
  }
  return write_heatmap(field, cfg, dir);
}

int run_residual(const CommonOptions& opts, double tolerance) {
  const auto cfg = load(opts, "fig1-verify");
  const auto sol = require_solution(cfg, "residual");
  const auto p = periodic_params(*cfg.params, cfg.grid->length());
  const auto report = residual_at(make_sampler(sol, p), p, *cfg.grid, cfg.verify.dt_probe,
                                  {cfg.verify.boundary, cfg.workers});
  std::cout << to_string(sol) << " residual: linf = " << format_number(report.linf)
            << ", l2 = " << format_number(report.l2) << " (n_s = " << report.n_s
            << ", n_t = " << report.n_t << ", dt_probe = " << format_number(report.dt_probe)
            << ")\nboundary jumps: value = " << format_number(report.value_jump)
            << ", slope = " << format_number(report.slope_jump) << '\n';
  std::ostringstream out;
  write_residual_report(report, out);
  const auto dir = output_dir(opts);
  write_text(dir / cfg.output.report, out.str());
  if (!(report.linf <= tolerance)) {
    std::cerr << "residual linf " << format_number(report.linf) << " exceeds tolerance "
              << format_number(tolerance) << '\n';
    return kNumerical;
  }
  std::cout << "within tolerance " << format_number(tolerance) << '\n';
  return kOk;
}

int run_simulate(const CommonOptions& opts) {
  const auto cfg = load(opts, "fig1-simulate");
  require_kind(cfg, ScenarioKind::simulate, "simulate");
  const auto& g = *cfg.grid;
  const auto p = periodic_params(*cfg.params, g.length());
  const auto initial =
      make_state(make_sampler(cfg.sim->initial, p), p, g.s_min, g.length(), g.n_s, g.t_min);
  std::optional<Sampler> reference;
  if (cfg.sim->reference) reference = make_sampler(*cfg.sim->reference, p);
  std::vector<double> snapshot_times;
  for (std::size_t i = 0; i < g.n_t; ++i) snapshot_times.push_back(g.t_at(i));

  const auto dir = output_dir(opts);
  SimulationReport report;
  try {
    report = simulate(initial, g.t_max, cfg.sim->dt, reference, snapshot_times);
  } catch (const BlowUpError& e) {
    std::ostringstream trace;
    write_simulation_trace(e.partial(), trace);
    write_text(dir / cfg.output.report, trace.str());
    throw;
  }

  std::ostringstream trace;
  write_simulation_trace(report, trace);
  write_text(dir / cfg.output.report, trace.str());

  WaveField field{g, {}, p, "simulate"};
  field.samples.reserve(g.size());
  for (const auto& snap : report.snapshots) {
    field.samples.insert(field.samples.end(), snap.samples.begin(), snap.samples.end());
  }
  write_csv(field, dir / cfg.output.csv);

  const double m0 = report.mass_trace.front();
  const double h0 = report.hamiltonian_trace.front();
  double mass_drift = 0.0, ham_drift = 0.0;
  for (std::size_t i = 0; i < report.times.size(); ++i) {
    mass_drift = std::max(mass_drift, std::abs(report.mass_trace[i] - m0) / std::abs(m0));
    ham_drift = std::max(ham_drift, std::abs(report.hamiltonian_trace[i] - h0) / std::abs(h0));
  }
  std::cout << "steps: " << report.times.size() - 1 << ", t = " << format_number(g.t_min)
            << " -> " << format_number(g.t_max) << '\n'
            << "relative mass drift: " << format_number(mass_drift) << '\n'
            << "relative hamiltonian drift: " << format_number(ham_drift) << '\n';
  if (!report.error_linf_vs_analytic.empty()) {
    std::cout << "final linf error vs " << to_string(*cfg.sim->reference) << ": "
              << format_number(report.error_linf_vs_analytic.back()) << '\n';
  }
  std::cout << "wrote " << (dir / cfg.output.report).string() << ", "
            << (dir / cfg.output.csv).string() << '\n';
  return write_heatmap(field, cfg, dir);
}

int run_mi(const CommonOptions& opts) {
  const auto cfg = load(opts, "mi-gain");
  require_kind(cfg, ScenarioKind::mi, "mi");
  const auto& mi = *cfg.mi;
  const auto result =
      mi_scenario(*cfg.params, mi.length, mi.n_s, mi.eps, mi.mode, mi.t_end, mi.dt, mi.seed);
  std::cout << "kappa = " << format_number(result.kappa)
            << ", cutoff sqrt(2)*alpha = " << format_number(std::sqrt(2.0) * std::abs(cfg.params->alpha()))
            << "\nlinear-stability growth rate = " << format_number(result.oracle_rate) << '\n';
  if (result.fitted_rate) {
    std::cout << "fitted growth rate = " << format_number(*result.fitted_rate) << " over t in ["
              << format_number(result.fit_t_begin) << ", " << format_number(result.fit_t_end)
              << "]\n";
  } else {
    std::cout << "no perturbation; largest sideband amplitude = "
              << format_number(result.max_sideband) << '\n';
  }
  std::ostringstream trace;
  write_mi_trace(result, trace);
  const auto dir = output_dir(opts);
  write_text(dir / cfg.output.report, trace.str());
  std::cout << "wrote " << (dir / cfg.output.report).string() << '\n';
  return kOk;
}

int run_bs(const CommonOptions& opts) {
  const auto cfg = load(opts, "bs-atm");
  require_kind(cfg, ScenarioKind::bs, "bs");
  const auto& bs = *cfg.bs;
  std::vector<double> spots(bs.n_s);
  for (std::size_t i = 0; i < bs.n_s; ++i) {
    spots[i] = bs.n_s == 1 ? bs.s_min
                           : bs.s_min + static_cast<double>(i) * (bs.s_max - bs.s_min) /
                                            static_cast<double>(bs.n_s - 1);
  }
  std::ostringstream csv;
  csv << "S,call,put,parity_gap\n";
  double worst_gap = 0.0;
  for (double s : spots) {
    const double gap = put_call_parity_gap(s, bs.contract);
    worst_gap = std::max(worst_gap, gap);
    csv << format_number(s) << ',' << format_number(bs_call_price(s, bs.contract)) << ','
        << format_number(bs_put_price(s, bs.contract)) << ',' << format_number(gap) << '\n';
  }
  std::cout << "max put-call parity gap: " << format_number(worst_gap) << '\n';
  if (bs.contract.maturity > 0.0) {
    const BsParams contract = bs.contract;
    const double residual = bs_pde_residual(
        [contract](double s, double tau) {
          BsParams at = contract;
          at.maturity = tau;
          return bs_call_price(s, at);
        },
        spots, contract, bs.bump);
    std::cout << "Black-Scholes PDE residual of the closed form: " << format_number(residual)
              << '\n';
  }
  const auto dir = output_dir(opts);
  write_text(dir / cfg.output.csv, csv.str());
  std::cout << "wrote " << (dir / cfg.output.csv).string() << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rogue-wave solutions of the nonlinear option-pricing wave equation"};
  app.require_subcommand(1);

  CommonOptions opts;
  double tolerance = 1e-6;
  std::string show;

  auto* eval = app.add_subcommand("eval", "Evaluate a closed-form solution: CSV + heatmap");
  add_common(eval, opts);
  auto* render = app.add_subcommand("render", "Render the intensity heatmap only");
  add_common(render, opts);
  auto* residual = app.add_subcommand("residual", "PDE residual of a closed-form solution");
  add_common(residual, opts);
  residual->add_option("--tolerance", tolerance, "Maximum accepted linf residual")
      ->capture_default_str();
  auto* sim = app.add_subcommand("simulate", "Split-step propagation with conservation traces");
  add_common(sim, opts);
  auto* mi = app.add_subcommand("mi", "Modulation-instability growth-rate probe");
  add_common(mi, opts);
  auto* bs = app.add_subcommand("bs", "Black-Scholes baseline prices and checks");
  add_common(bs, opts);
  auto* presets = app.add_subcommand("presets", "List built-in scenarios or print one");
  presets->add_option("--show", show, "Preset to print");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  try {
    if (*eval) return run_eval(opts, true);
    if (*render) return run_eval(opts, false);
    if (*residual) return run_residual(opts, tolerance);
    if (*sim) return run_simulate(opts);
    if (*mi) return run_mi(opts);
    if (*bs) return run_bs(opts);
    if (*presets) {
      if (show.empty()) {
        for (auto name : preset_names()) std::cout << name << '\n';
      } else {
        std::cout << preset_text(show);
      }
      return kOk;
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
  return kOk;
}
