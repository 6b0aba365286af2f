#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "finrogue/bs_baseline.hpp"
#include "finrogue/export.hpp"
#include "finrogue/model.hpp"
#include "finrogue/rogons.hpp"
#include "finrogue/verify.hpp"

namespace finrogue {

enum class ScenarioKind { plane, rogon1, rogon2, simulate, mi, bs };

std::string_view to_string(ScenarioKind kind) noexcept;
std::optional<ScenarioKind> parse_kind(std::string_view name) noexcept;

/// The closed-form solution of an evaluation scenario, if it is one.
std::optional<Solution> as_solution(ScenarioKind kind) noexcept;

struct SimulationSettings {
  Solution initial = Solution::rogon1;
  std::optional<Solution> reference;
  double dt = 1e-3;

  bool operator==(const SimulationSettings&) const = default;
};

struct MiSettings {
  double length = 0.0;
  std::size_t n_s = 0;
  double eps = 0.0;
  std::size_t mode = 0;
  double t_end = 0.0;
  double dt = 0.0;
  std::uint64_t seed = 0;

  bool operator==(const MiSettings&) const = default;
};

struct BsSettings {
  BsParams contract{};
  double s_min = 0.0;
  double s_max = 0.0;
  std::size_t n_s = 0;
  double bump = 1e-3;

  bool operator==(const BsSettings&) const = default;
};

struct VerifySettings {
  double dt_probe = 1e-3;
  BoundaryTreatment boundary = BoundaryTreatment::jump_corrected;

  bool operator==(const VerifySettings&) const = default;
};

struct OutputSettings {
  std::string csv = "field.csv";
  std::string image = "field.pgm";
  std::string report = "report.csv";

  bool operator==(const OutputSettings&) const = default;
};

/// A fully validated scenario. Sections that the scenario kind does not use
/// are left empty.
struct ScenarioConfig {
  ScenarioKind solution = ScenarioKind::rogon1;
  std::optional<MarketParams> params;
  std::optional<SpaceTimeGrid> grid;
  std::optional<SimulationSettings> sim;
  std::optional<MiSettings> mi;
  std::optional<BsSettings> bs;
  VerifySettings verify;
  Normalization render;
  OutputSettings output;
  unsigned workers = 1;

  bool operator==(const ScenarioConfig&) const = default;
};

/// One `key = value` assignment and the line it came from (0 for overrides).
struct RawEntry {
  std::string key;
  std::string value;
  int line = 0;
};

/// Assignments in first-seen order with unique keys.
using RawConfig = std::vector<RawEntry>;

/// Syntax pass: `key = value` lines, `#` comments, blank lines. Rejects
/// malformed lines, unknown keys and duplicates, citing the line number.
RawConfig parse_raw(std::string_view text);

/// Applies a `key=value` override; the last write to a key wins.
void apply_override(RawConfig& raw, std::string_view assignment);

/// Semantic pass. Missing required keys are reported together in one
/// ValidationError; otherwise the first invalid value is reported by key.
ScenarioConfig build_config(const RawConfig& raw);

ScenarioConfig parse_config(std::string_view text);

/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ScenarioConfig& config);

/// Every key the parser accepts.
const std::vector<std::string_view>& known_keys();

/// Names of the built-in scenarios.
const std::vector<std::string_view>& preset_names();

/// Config text of a built-in scenario; throws ValidationError for an unknown name.
std::string_view preset_text(std::string_view name);

}  // namespace finrogue
