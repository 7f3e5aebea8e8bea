#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "spinsurf/field.hpp"

namespace spinsurf {

/// Angular wavenumbers of one Fourier mode on a periodic grid. `kx`/`ky` have
/// the Nyquist mode zeroed (use for odd derivatives); `kx_full`/`ky_full`
/// keep it (use for even derivatives).
struct Wavenumber {
  double kx = 0.0;
  double ky = 0.0;
  double kx_full = 0.0;
  double ky_full = 0.0;
};

/// 2-D complex FFT on a fully periodic grid, backed by FFTW plans.
/// Instances are move-only; plans are created once per instance.
class Fft2D {
 public:
  explicit Fft2D(const Grid2D& grid);
  ~Fft2D();
  Fft2D(Fft2D&&) noexcept;
  Fft2D& operator=(Fft2D&&) noexcept;
  Fft2D(const Fft2D&) = delete;
  Fft2D& operator=(const Fft2D&) = delete;

  const Grid2D& grid() const noexcept;

  /// Unnormalized forward transform.
  void forward(std::span<const cplx> in, std::span<cplx> out) const;
  /// Inverse transform including the 1/N normalization.
  void inverse(std::span<const cplx> in, std::span<cplx> out) const;

  Wavenumber wavenumber(std::size_t i) const noexcept;

  /// Returns IFFT(m(k) * FFT(f)).
  ComplexField apply(const ComplexField& f, const std::function<cplx(const Wavenumber&)>& multiplier) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Shared transform for a grid; plans are cached by grid shape.
const Fft2D& fft_for(const Grid2D& grid);

}  // namespace spinsurf
