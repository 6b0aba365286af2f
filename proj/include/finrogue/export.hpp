#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "finrogue/dynamics.hpp"
#include "finrogue/model.hpp"
#include "finrogue/verify.hpp"

namespace finrogue {

/// Intensity range mapped onto the 0..255 gray levels.
struct Normalization {
  enum class Mode { global_minmax, fixed };
  Mode mode = Mode::global_minmax;
  double lo = 0.0;
  double hi = 0.0;

  static Normalization global() { return {}; }
  static Normalization fixed_range(double lo, double hi) { return {Mode::fixed, lo, hi}; }

  bool operator==(const Normalization&) const = default;
};

/// Shortest decimal that reads back to the same double; negative zero is
/// written as "0".
std::string format_number(double value);

/// `S,t,re,im,intensity` rows, time-major then S, LF line endings.
void write_csv(const WaveField& field, std::ostream& out);
void write_csv(const WaveField& field, const std::filesystem::path& destination);

/**
 * Binary portable graymap (P5, maxval 255) of |psi|^2: width n_s, height
 * n_t, first row t_min. Pixel = round(255 (I - lo)/(hi - lo)) clamped to
 * 0..255. Throws ValidationError when hi <= lo.
 */
std::string render_heatmap(const WaveField& field, const Normalization& norm);

void write_bytes(const std::filesystem::path& destination, std::string_view bytes);

/// `t,mass,hamiltonian[,error_linf]` per recorded step.
void write_simulation_trace(const SimulationReport& report, std::ostream& out);

/// `t,amplitude` of the perturbation mode.
void write_mi_trace(const MiResult& result, std::ostream& out);

/// One header line and one value line.
void write_residual_report(const ResidualReport& report, std::ostream& out);

}  // namespace finrogue
