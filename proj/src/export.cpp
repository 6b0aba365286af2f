#include "finrogue/export.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "finrogue/error.hpp"

namespace finrogue {

std::string format_number(double value) {
  if (value == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void write_csv(const WaveField& field, std::ostream& out) {
  if (field.samples.empty()) throw ValidationError("cannot export an empty wave field");
  check_field(field);
  const auto& g = field.grid;
  std::string line;
  out << "S,t,re,im,intensity\n";
  for (std::size_t i = 0; i < g.n_t; ++i) {
    const std::string t = format_number(g.t_at(i));
    for (std::size_t j = 0; j < g.n_s; ++j) {
      const Complex z = field.at(i, j);
      line.clear();
      line += format_number(g.s_at(j));
      line += ',';
      line += t;
      line += ',';
      line += format_number(z.real());
      line += ',';
      line += format_number(z.imag());
      line += ',';
      line += format_number(std::norm(z));
      line += '\n';
      out << line;
    }
  }
}

void write_csv(const WaveField& field, const std::filesystem::path& destination) {
  std::ostringstream buffer;
  write_csv(field, buffer);
  write_bytes(destination, buffer.str());
}

std::string render_heatmap(const WaveField& field, const Normalization& norm) {
  if (field.samples.empty()) throw ValidationError("cannot render an empty wave field");
  check_field(field);

  double lo = norm.lo, hi = norm.hi;
  if (norm.mode == Normalization::Mode::global_minmax) {
    lo = hi = std::norm(field.samples.front());
    for (const auto& z : field.samples) {
      const double v = std::norm(z);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  // a few ulps of spread is still a constant field
  if (!(hi - lo > 1e-12 * std::max(std::abs(lo), std::abs(hi)))) {
    std::ostringstream msg;
    msg << "degenerate heatmap normalization (lo=" << lo << ", hi=" << hi
        << "); a constant-intensity field needs render.normalization = fixed with "
           "render.lo < render.hi";
    throw ValidationError(msg.str());
  }

  const auto& g = field.grid;
  std::string bytes = "P5\n" + std::to_string(g.n_s) + " " + std::to_string(g.n_t) + "\n255\n";
  const std::size_t header = bytes.size();
  bytes.resize(header + field.samples.size());
  const double scale = 255.0 / (hi - lo);
  for (std::size_t idx = 0; idx < field.samples.size(); ++idx) {
    const double level = std::clamp(scale * (std::norm(field.samples[idx]) - lo), 0.0, 255.0);
    bytes[header + idx] = static_cast<char>(static_cast<unsigned char>(std::lround(level)));
  }
  return bytes;
}

void write_bytes(const std::filesystem::path& destination, std::string_view bytes) {
  std::ofstream out(destination, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + destination.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw IoError("failed writing " + destination.string());
}

void write_simulation_trace(const SimulationReport& report, std::ostream& out) {
  const bool with_error = !report.error_linf_vs_analytic.empty();
  out << "t,mass,hamiltonian" << (with_error ? ",error_linf" : "") << '\n';
  for (std::size_t i = 0; i < report.times.size(); ++i) {
    out << format_number(report.times[i]) << ',' << format_number(report.mass_trace[i]) << ','
        << format_number(report.hamiltonian_trace[i]);
    if (with_error) out << ',' << format_number(report.error_linf_vs_analytic[i]);
    out << '\n';
  }
}

void write_mi_trace(const MiResult& result, std::ostream& out) {
  out << "t,amplitude\n";
  for (std::size_t i = 0; i < result.mode_times.size(); ++i) {
    out << format_number(result.mode_times[i]) << ',' << format_number(result.mode_amplitude[i])
        << '\n';
  }
}

void write_residual_report(const ResidualReport& report, std::ostream& out) {
  out << "linf,l2,n_s,n_t,dt_probe,value_jump,slope_jump\n"
      << format_number(report.linf) << ',' << format_number(report.l2) << ',' << report.n_s << ','
      << report.n_t << ',' << format_number(report.dt_probe) << ','
      << format_number(report.value_jump) << ',' << format_number(report.slope_jump) << '\n';
}

}  // namespace finrogue
