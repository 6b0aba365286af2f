#include "finrogue/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "finrogue/error.hpp"

namespace finrogue {

namespace {

const std::vector<std::string_view> kKeys = {
    "solution",
    "params.sigma", "params.beta", "params.alpha", "params.k",
    "grid.s_min", "grid.s_max", "grid.n_s", "grid.t_min", "grid.t_max", "grid.n_t",
    "verify.dt_probe", "verify.boundary",
    "sim.initial", "sim.reference", "sim.dt",
    "mi.length", "mi.n_s", "mi.eps", "mi.mode", "mi.t_end", "mi.dt", "mi.seed",
    "bs.r", "bs.sigma", "bs.strike", "bs.maturity", "bs.s_min", "bs.s_max", "bs.n_s", "bs.bump",
    "render.normalization", "render.lo", "render.hi",
    "output.csv", "output.image", "output.report",
    "run.workers",
};

const std::vector<std::string_view> kParamKeys = {"params.sigma", "params.beta", "params.alpha",
                                                  "params.k"};
const std::vector<std::string_view> kGridKeys = {"grid.s_min", "grid.s_max", "grid.n_s",
                                                 "grid.t_min", "grid.t_max", "grid.n_t"};
const std::vector<std::string_view> kMiKeys = {"mi.length", "mi.n_s", "mi.eps", "mi.mode",
                                               "mi.t_end", "mi.dt"};
const std::vector<std::string_view> kBsKeys = {"bs.r",        "bs.sigma", "bs.strike",
                                               "bs.maturity", "bs.s_min", "bs.s_max",
                                               "bs.n_s"};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool is_known(std::string_view key) {
  return std::find(kKeys.begin(), kKeys.end(), key) != kKeys.end();
}

std::string where(const RawEntry& e) {
  std::string prefix = e.line > 0 ? "line " + std::to_string(e.line) + ": " : "";
  return prefix + e.key;
}

// Typed lookups over the raw assignments; errors name the key.
class Lookup {
public:
  explicit Lookup(const RawConfig& raw) {
    for (const auto& e : raw) entries_[e.key] = &e;
  }

  bool has(std::string_view key) const { return entries_.count(std::string(key)) != 0; }

  const RawEntry& entry(std::string_view key) const { return *entries_.at(std::string(key)); }

  std::string text(std::string_view key) const { return entry(key).value; }

  double number(std::string_view key) const {
    const auto& e = entry(key);
    double v = 0.0;
    const auto* end = e.value.data() + e.value.size();
    const auto res = std::from_chars(e.value.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v)) {
      throw ValidationError(where(e) + ": expected a finite number, got '" + e.value + "'");
    }
    return v;
  }

  std::uint64_t count(std::string_view key) const {
    const auto& e = entry(key);
    std::uint64_t v = 0;
    const auto* end = e.value.data() + e.value.size();
    const auto res = std::from_chars(e.value.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end) {
      throw ValidationError(where(e) + ": expected a non-negative integer, got '" + e.value + "'");
    }
    return v;
  }

  [[noreturn]] void fail(std::string_view key, const std::string& why) const {
    throw ValidationError(where(entry(key)) + ": " + why);
  }

  template <class Fn>
  auto checked(std::string_view key, Fn&& fn) const {
    try {
      return fn();
    } catch (const ValidationError& e) {
      fail(key, e.what());
    }
  }

private:
  std::map<std::string, const RawEntry*> entries_;
};

Solution solution_value(const Lookup& in, std::string_view key) {
  const auto s = parse_solution(in.text(key));
  if (!s) in.fail(key, "expected plane, rogon1 or rogon2, got '" + in.text(key) + "'");
  return *s;
}

}  // namespace

std::string_view to_string(ScenarioKind kind) noexcept {
  switch (kind) {
    case ScenarioKind::plane: return "plane";
    case ScenarioKind::rogon1: return "rogon1";
    case ScenarioKind::rogon2: return "rogon2";
    case ScenarioKind::simulate: return "simulate";
    case ScenarioKind::mi: return "mi";
    case ScenarioKind::bs: return "bs";
  }
  return "unknown";
}

std::optional<ScenarioKind> parse_kind(std::string_view name) noexcept {
  for (auto kind : {ScenarioKind::plane, ScenarioKind::rogon1, ScenarioKind::rogon2,
                    ScenarioKind::simulate, ScenarioKind::mi, ScenarioKind::bs}) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

std::optional<Solution> as_solution(ScenarioKind kind) noexcept {
  switch (kind) {
    case ScenarioKind::plane: return Solution::plane;
    case ScenarioKind::rogon1: return Solution::rogon1;
    case ScenarioKind::rogon2: return Solution::rogon2;
    default: return std::nullopt;
  }
}

const std::vector<std::string_view>& known_keys() { return kKeys; }

RawConfig parse_raw(std::string_view text) {
  RawConfig raw;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ValidationError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    if (!is_known(key)) {
      throw ValidationError("line " + std::to_string(line_no) + ": unknown key '" +
                            std::string(key) + "'");
    }
    const bool duplicate = std::any_of(raw.begin(), raw.end(),
                                       [&](const RawEntry& e) { return e.key == key; });
    if (duplicate) {
      throw ValidationError("line " + std::to_string(line_no) + ": duplicate key '" +
                            std::string(key) + "'");
    }
    raw.push_back({std::string(key), std::string(value), line_no});
  }
  return raw;
}

void apply_override(RawConfig& raw, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ValidationError("override '" + std::string(assignment) + "' is not key=value");
  }
  const auto key = trim(assignment.substr(0, eq));
  const auto value = trim(assignment.substr(eq + 1));
  if (key.empty() || value.empty()) {
    throw ValidationError("override '" + std::string(assignment) + "' is not key=value");
  }
  if (!is_known(key)) throw ValidationError("override: unknown key '" + std::string(key) + "'");
  for (auto& e : raw) {
    if (e.key == key) {
      e.value = std::string(value);
      e.line = 0;
      return;
    }
  }
  raw.push_back({std::string(key), std::string(value), 0});
}

ScenarioConfig build_config(const RawConfig& raw) {
  const Lookup in(raw);

  std::optional<ScenarioKind> kind;
  if (in.has("solution")) {
    kind = parse_kind(in.text("solution"));
    if (!kind) {
      in.fail("solution", "expected one of plane, rogon1, rogon2, simulate, mi, bs, got '" +
                              in.text("solution") + "'");
    }
  }

  std::vector<std::string_view> required;
  const bool needs_params = !kind || *kind != ScenarioKind::bs;
  const bool needs_grid = kind && (as_solution(*kind) || *kind == ScenarioKind::simulate);
  if (!kind) required.push_back("solution");
  if (needs_params) required.insert(required.end(), kParamKeys.begin(), kParamKeys.end());
  if (needs_grid) required.insert(required.end(), kGridKeys.begin(), kGridKeys.end());
  if (kind == ScenarioKind::simulate) {
    required.push_back("sim.initial");
    required.push_back("sim.dt");
  }
  if (kind == ScenarioKind::mi) required.insert(required.end(), kMiKeys.begin(), kMiKeys.end());
  if (kind == ScenarioKind::bs) required.insert(required.end(), kBsKeys.begin(), kBsKeys.end());
  if (in.has("render.normalization") && in.text("render.normalization") == "fixed") {
    required.push_back("render.lo");
    required.push_back("render.hi");
  }

  std::vector<std::string_view> missing;
  for (auto key : required) {
    if (!in.has(key)) missing.push_back(key);
  }
  if (!missing.empty()) {
    std::string msg = "missing required keys:";
    for (auto key : missing) msg += " " + std::string(key);
    throw ValidationError(msg);
  }

  ScenarioConfig cfg;
  cfg.solution = *kind;

  if (needs_params) {
    const double sigma = in.number("params.sigma"), beta = in.number("params.beta");
    const double alpha = in.number("params.alpha"), k = in.number("params.k");
    if (!(sigma * beta > 0.0)) {
      in.fail("params.beta", "sigma*beta must be > 0 (sigma=" + in.text("params.sigma") +
                                 ", beta=" + in.text("params.beta") + ")");
    }
    cfg.params = in.checked("params.alpha", [&] { return make_params(sigma, beta, alpha, k); });
  }

  if (needs_grid) {
    const double s_min = in.number("grid.s_min"), s_max = in.number("grid.s_max");
    const double t_min = in.number("grid.t_min"), t_max = in.number("grid.t_max");
    const auto n_s = in.count("grid.n_s"), n_t = in.count("grid.n_t");
    cfg.grid = in.checked("grid.n_s", [&] { return make_grid(s_min, s_max, n_s, t_min, t_max, n_t); });
  }

  if (in.has("verify.dt_probe")) {
    cfg.verify.dt_probe = in.number("verify.dt_probe");
    if (!(cfg.verify.dt_probe > 0.0)) in.fail("verify.dt_probe", "must be > 0");
  }
  if (in.has("verify.boundary")) {
    const auto b = in.text("verify.boundary");
    if (b == "periodic") {
      cfg.verify.boundary = BoundaryTreatment::periodic;
    } else if (b == "jump_corrected") {
      cfg.verify.boundary = BoundaryTreatment::jump_corrected;
    } else {
      in.fail("verify.boundary", "expected periodic or jump_corrected, got '" + b + "'");
    }
  }

  if (kind == ScenarioKind::simulate) {
    SimulationSettings sim;
    sim.initial = solution_value(in, "sim.initial");
    if (in.has("sim.reference") && in.text("sim.reference") != "none") {
      sim.reference = solution_value(in, "sim.reference");
    }
    sim.dt = in.number("sim.dt");
    if (!(sim.dt > 0.0)) in.fail("sim.dt", "must be > 0");
    cfg.sim = sim;
  }

  if (kind == ScenarioKind::mi) {
    MiSettings mi;
    mi.length = in.number("mi.length");
    mi.n_s = in.count("mi.n_s");
    mi.eps = in.number("mi.eps");
    mi.mode = in.count("mi.mode");
    mi.t_end = in.number("mi.t_end");
    mi.dt = in.number("mi.dt");
    mi.seed = in.has("mi.seed") ? in.count("mi.seed") : 0;
    if (!(mi.length > 0.0)) in.fail("mi.length", "must be > 0");
    if (!is_power_of_two(mi.n_s)) in.fail("mi.n_s", "must be a power of two");
    if (mi.mode == 0 || mi.mode >= mi.n_s / 2) in.fail("mi.mode", "must satisfy 0 < mode < n_s/2");
    const double amp = std::abs(background_amplitude(*cfg.params));
    if (!(mi.eps >= 0.0) || mi.eps > 1e-3 * amp) in.fail("mi.eps", "must lie in [0, 1e-3*|A|]");
    if (!(mi.t_end > 0.0)) in.fail("mi.t_end", "must be > 0");
    if (!(mi.dt > 0.0)) in.fail("mi.dt", "must be > 0");
    cfg.mi = mi;
  }

  if (kind == ScenarioKind::bs) {
    BsSettings bs;
    const double r = in.number("bs.r"), vol = in.number("bs.sigma");
    const double strike = in.number("bs.strike"), maturity = in.number("bs.maturity");
    bs.contract = in.checked("bs.sigma", [&] { return make_bs_params(r, vol, strike, maturity); });
    bs.s_min = in.number("bs.s_min");
    bs.s_max = in.number("bs.s_max");
    bs.n_s = in.count("bs.n_s");
    if (in.has("bs.bump")) bs.bump = in.number("bs.bump");
    if (!(bs.s_min > 0.0)) in.fail("bs.s_min", "must be > 0");
    if (!(bs.s_max >= bs.s_min)) in.fail("bs.s_max", "must be >= bs.s_min");
    if (bs.n_s == 0) in.fail("bs.n_s", "must be >= 1");
    if (bs.n_s == 1 && bs.s_max != bs.s_min) in.fail("bs.n_s", "a single spot needs s_min == s_max");
    if (!(bs.bump > 0.0) || bs.bump > 0.05) in.fail("bs.bump", "must lie in (0, 0.05]");
    cfg.bs = bs;
  }

  if (in.has("render.normalization")) {
    const auto mode = in.text("render.normalization");
    if (mode == "global-minmax") {
      cfg.render = Normalization::global();
    } else if (mode == "fixed") {
      cfg.render = Normalization::fixed_range(in.number("render.lo"), in.number("render.hi"));
      if (!(cfg.render.hi > cfg.render.lo)) in.fail("render.hi", "must be > render.lo");
    } else {
      in.fail("render.normalization", "expected global-minmax or fixed, got '" + mode + "'");
    }
  }

  for (auto [key, slot] : {std::pair{"output.csv", &cfg.output.csv},
                           std::pair{"output.image", &cfg.output.image},
                           std::pair{"output.report", &cfg.output.report}}) {
    if (!in.has(key)) continue;
    *slot = in.text(key);
    if (slot->find('/') != std::string::npos) in.fail(key, "must be a plain file name");
  }

  if (in.has("run.workers")) {
    const auto w = in.count("run.workers");
    if (w == 0 || w > 1024) in.fail("run.workers", "must lie in 1..1024");
    cfg.workers = static_cast<unsigned>(w);
  }
  return cfg;
}

ScenarioConfig parse_config(std::string_view text) { return build_config(parse_raw(text)); }

std::string serialize_config(const ScenarioConfig& c) {
  std::ostringstream out;
  auto put = [&](std::string_view key, const std::string& value) {
    out << key << " = " << value << '\n';
  };
  auto num = [](double v) { return format_number(v); };

  put("solution", std::string(to_string(c.solution)));
  if (c.params) {
    put("params.sigma", num(c.params->sigma()));
    put("params.beta", num(c.params->beta()));
    put("params.alpha", num(c.params->alpha()));
    put("params.k", num(c.params->k()));
  }
  if (c.grid) {
    put("grid.s_min", num(c.grid->s_min));
    put("grid.s_max", num(c.grid->s_max));
    put("grid.n_s", std::to_string(c.grid->n_s));
    put("grid.t_min", num(c.grid->t_min));
    put("grid.t_max", num(c.grid->t_max));
    put("grid.n_t", std::to_string(c.grid->n_t));
  }
  put("verify.dt_probe", num(c.verify.dt_probe));
  put("verify.boundary",
      c.verify.boundary == BoundaryTreatment::periodic ? "periodic" : "jump_corrected");
  if (c.sim) {
    put("sim.initial", std::string(to_string(c.sim->initial)));
    put("sim.reference", c.sim->reference ? std::string(to_string(*c.sim->reference)) : "none");
    put("sim.dt", num(c.sim->dt));
  }
  if (c.mi) {
    put("mi.length", num(c.mi->length));
    put("mi.n_s", std::to_string(c.mi->n_s));
    put("mi.eps", num(c.mi->eps));
    put("mi.mode", std::to_string(c.mi->mode));
    put("mi.t_end", num(c.mi->t_end));
    put("mi.dt", num(c.mi->dt));
    put("mi.seed", std::to_string(c.mi->seed));
  }
  if (c.bs) {
    put("bs.r", num(c.bs->contract.r));
    put("bs.sigma", num(c.bs->contract.sigma_bs));
    put("bs.strike", num(c.bs->contract.strike));
    put("bs.maturity", num(c.bs->contract.maturity));
    put("bs.s_min", num(c.bs->s_min));
    put("bs.s_max", num(c.bs->s_max));
    put("bs.n_s", std::to_string(c.bs->n_s));
    put("bs.bump", num(c.bs->bump));
  }
  if (c.render.mode == Normalization::Mode::fixed) {
    put("render.normalization", "fixed");
    put("render.lo", num(c.render.lo));
    put("render.hi", num(c.render.hi));
  } else {
    put("render.normalization", "global-minmax");
  }
  put("output.csv", c.output.csv);
  put("output.image", c.output.image);
  put("output.report", c.output.report);
  put("run.workers", std::to_string(c.workers));
  return out.str();
}

namespace {

constexpr std::string_view kFig1a = R"(# one-rogon intensity, k = 0
solution = rogon1
params.sigma = 0.3
params.beta = 0.03
params.alpha = 2
params.k = 0
grid.s_min = -8
grid.s_max = 8
grid.n_s = 256
grid.t_min = -3
grid.t_max = 3
grid.n_t = 193
output.csv = fig1a.csv
output.image = fig1a.pgm
)";

constexpr std::string_view kFig1c = R"(# one-rogon intensity, drifting with k = -1.5
solution = rogon1
params.sigma = 0.3
params.beta = 0.03
params.alpha = 2
params.k = -1.5
grid.s_min = -8
grid.s_max = 8
grid.n_s = 256
grid.t_min = -3
grid.t_max = 3
grid.n_t = 193
output.csv = fig1c.csv
output.image = fig1c.pgm
)";

constexpr std::string_view kFig2a = R"(# two-rogon intensity, k = 0
solution = rogon2
params.sigma = 0.3
params.beta = 0.03
params.alpha = 0.8
params.k = 0
grid.s_min = -16
grid.s_max = 16
grid.n_s = 256
grid.t_min = -6
grid.t_max = 6
grid.n_t = 193
output.csv = fig2a.csv
output.image = fig2a.pgm
)";

constexpr std::string_view kFig2c = R"(# two-rogon intensity, drifting with k = -1.5
solution = rogon2
params.sigma = 0.3
params.beta = 0.03
params.alpha = 0.8
params.k = -1.5
grid.s_min = -16
grid.s_max = 16
grid.n_s = 256
grid.t_min = -6
grid.t_max = 6
grid.n_t = 193
output.csv = fig2c.csv
output.image = fig2c.pgm
)";

constexpr std::string_view kFig1Verify = R"(# PDE residual of the one-rogon solution on a wide window
solution = rogon1
params.sigma = 0.3
params.beta = 0.03
params.alpha = 2
params.k = 0
grid.s_min = -60
grid.s_max = 60
grid.n_s = 4096
grid.t_min = -3
grid.t_max = 3
grid.n_t = 7
verify.dt_probe = 1e-3
output.report = residual.csv
)";

constexpr std::string_view kFig2Verify = R"(# PDE residual of the two-rogon solution on a wide window
solution = rogon2
params.sigma = 0.3
params.beta = 0.03
params.alpha = 0.8
params.k = 0
grid.s_min = -60
grid.s_max = 60
grid.n_s = 4096
grid.t_min = -3
grid.t_max = 3
grid.n_t = 7
verify.dt_probe = 1e-3
output.report = residual.csv
)";

constexpr std::string_view kFig1Simulate = R"(# Split-step propagation of the one-rogon solution from t = -3 to 3
solution = simulate
params.sigma = 0.3
params.beta = 0.03
params.alpha = 2
params.k = 0
grid.s_min = -60
grid.s_max = 60
grid.n_s = 4096
grid.t_min = -3
grid.t_max = 3
grid.n_t = 61
sim.initial = rogon1
sim.reference = rogon1
sim.dt = 1e-3
output.csv = simulate.csv
output.image = simulate.pgm
output.report = trace.csv
)";

constexpr std::string_view kMiGain = R"(# Modulation instability at the maximum-gain wavenumber kappa = alpha
solution = mi
params.sigma = 0.3
params.beta = 0.03
params.alpha = 2
params.k = 0
mi.length = 12.566370614359172
mi.n_s = 256
mi.eps = 1e-3
mi.mode = 4
mi.t_end = 20
mi.dt = 1e-3
mi.seed = 7
output.report = mi_trace.csv
)";

constexpr std::string_view kMiStable = R"(# Modulation above the cutoff kappa = sqrt(2) alpha: no growth
solution = mi
params.sigma = 0.3
params.beta = 0.03
params.alpha = 2
params.k = 0
mi.length = 12.566370614359172
mi.n_s = 256
mi.eps = 1e-3
mi.mode = 7
mi.t_end = 40
mi.dt = 1e-3
mi.seed = 7
output.report = mi_trace.csv
)";

constexpr std::string_view kBsAtm = R"(# At-the-money European call, one year
solution = bs
bs.r = 0.05
bs.sigma = 0.2
bs.strike = 100
bs.maturity = 1
bs.s_min = 50
bs.s_max = 150
bs.n_s = 101
bs.bump = 1e-3
output.csv = bs.csv
)";

const std::vector<std::pair<std::string_view, std::string_view>> kPresets = {
    {"fig1a", kFig1a},           {"fig1c", kFig1c},           {"fig2a", kFig2a},
    {"fig2c", kFig2c},           {"fig1-verify", kFig1Verify}, {"fig2-verify", kFig2Verify},
    {"fig1-simulate", kFig1Simulate}, {"mi-gain", kMiGain},    {"mi-stable", kMiStable},
    {"bs-atm", kBsAtm},
};

}  // namespace

const std::vector<std::string_view>& preset_names() {
  static const std::vector<std::string_view> names = [] {
    std::vector<std::string_view> out;
    for (const auto& [name, text] : kPresets) out.push_back(name);
    return out;
  }();
  return names;
}

std::string_view preset_text(std::string_view name) {
  for (const auto& [n, text] : kPresets) {
    if (n == name) return text;
  }
  throw ValidationError("unknown preset '" + std::string(name) + "'");
}

}  // namespace finrogue
