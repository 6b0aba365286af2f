#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "finrogue/model.hpp"

namespace finrogue {

/**
 * Complex 1-D discrete Fourier transform of a fixed length, backed by FFTW.
 *
 * Each instance owns its plans and aligned work buffer, so one instance per
 * thread is safe. Plans are built with FFTW_ESTIMATE, which makes the
 * transform a deterministic function of its input.
 */
class Fft {
public:
  explicit Fft(std::size_t n);
  ~Fft();
  Fft(Fft&&) noexcept;
  Fft& operator=(Fft&&) noexcept;
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  std::size_t size() const noexcept;

  /// out_m = sum_j in_j exp(-2 pi i j m / n). in and out may alias.
  void forward(std::span<const Complex> in, std::span<Complex> out);
  /// Unnormalized inverse: out_j = sum_m in_m exp(+2 pi i j m / n).
  void backward(std::span<const Complex> in, std::span<Complex> out);

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Angular wavenumbers of the periodic grid in FFT order:
/// 2 pi m / length for m = 0..n/2-1, then -n/2..-1.
std::vector<double> wavenumbers(std::size_t n, double length);

/// Spectral second derivative of a periodic row of samples.
void spectral_second_derivative(Fft& fft, std::span<const Complex> row, double length,
                                std::span<Complex> out);

/// Spectral first derivative of a periodic row. The Nyquist mode is dropped.
void spectral_first_derivative(Fft& fft, std::span<const Complex> row, double length,
                               std::span<Complex> out);

}  // namespace finrogue
