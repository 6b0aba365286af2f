#include "finrogue/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <numbers>

#include "finrogue/error.hpp"

namespace finrogue {

namespace {

// The FFTW planner is not re-entrant; execution of existing plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct Fft::Impl {
  std::size_t n = 0;
  fftw_complex* buffer = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  explicit Impl(std::size_t size) : n(size) {
    std::lock_guard lock(planner_mutex());
    buffer = fftw_alloc_complex(n);
    if (buffer == nullptr) throw std::bad_alloc();
    const int len = static_cast<int>(n);
    fwd = fftw_plan_dft_1d(len, buffer, buffer, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_1d(len, buffer, buffer, FFTW_BACKWARD, FFTW_ESTIMATE);
  }

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    if (fwd != nullptr) fftw_destroy_plan(fwd);
    if (bwd != nullptr) fftw_destroy_plan(bwd);
    fftw_free(buffer);
  }

  void run(fftw_plan plan, std::span<const Complex> in, std::span<Complex> out) {
    if (in.size() != n || out.size() != n) {
      throw ValidationError("FFT input/output length mismatch");
    }
    auto* work = reinterpret_cast<Complex*>(buffer);
    std::copy(in.begin(), in.end(), work);
    fftw_execute(plan);
    std::copy(work, work + n, out.begin());
  }
};

Fft::Fft(std::size_t n) {
  if (n == 0) throw ValidationError("FFT length must be positive");
  impl_ = std::make_unique<Impl>(n);
}

Fft::~Fft() = default;
Fft::Fft(Fft&&) noexcept = default;
Fft& Fft::operator=(Fft&&) noexcept = default;

std::size_t Fft::size() const noexcept { return impl_->n; }

void Fft::forward(std::span<const Complex> in, std::span<Complex> out) {
  impl_->run(impl_->fwd, in, out);
}

void Fft::backward(std::span<const Complex> in, std::span<Complex> out) {
  impl_->run(impl_->bwd, in, out);
}

std::vector<double> wavenumbers(std::size_t n, double length) {
  std::vector<double> kappa(n);
  const double unit = 2.0 * std::numbers::pi / length;
  const auto half = static_cast<std::ptrdiff_t>(n / 2);
  for (std::size_t m = 0; m < n; ++m) {
    auto idx = static_cast<std::ptrdiff_t>(m);
    if (idx >= half) idx -= static_cast<std::ptrdiff_t>(n);
    kappa[m] = unit * static_cast<double>(idx);
  }
  return kappa;
}

void spectral_second_derivative(Fft& fft, std::span<const Complex> row, double length,
                                std::span<Complex> out) {
  const std::size_t n = row.size();
  const auto kappa = wavenumbers(n, length);
  fft.forward(row, out);
  const double norm = 1.0 / static_cast<double>(n);
  for (std::size_t m = 0; m < n; ++m) out[m] *= -kappa[m] * kappa[m] * norm;
  fft.backward(out, out);
}

void spectral_first_derivative(Fft& fft, std::span<const Complex> row, double length,
                               std::span<Complex> out) {
  const std::size_t n = row.size();
  const auto kappa = wavenumbers(n, length);
  fft.forward(row, out);
  const double norm = 1.0 / static_cast<double>(n);
  for (std::size_t m = 0; m < n; ++m) out[m] *= Complex(0.0, kappa[m] * norm);
  if (n % 2 == 0) out[n / 2] = 0.0;
  fft.backward(out, out);
}

}  // namespace finrogue
