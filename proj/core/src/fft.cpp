#include "spinsurf/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "spinsurf/error.hpp"

namespace spinsurf {
namespace {

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

std::vector<double> wavenumbers(int n, double length, bool keep_nyquist) {
  std::vector<double> k(static_cast<std::size_t>(n));
  const double base = 2.0 * std::numbers::pi / length;
  for (int j = 0; j < n; ++j) {
    int m = j <= n / 2 ? j : j - n;
    if (n % 2 == 0 && j == n / 2 && !keep_nyquist) m = 0;
    k[static_cast<std::size_t>(j)] = base * m;
  }
  return k;
}

}  // namespace

struct Fft2D::Impl {
  Grid2D grid;
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
  std::vector<double> kx, ky, kx_full, ky_full;

  ~Impl() {
    std::lock_guard lock(plan_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (inv) fftw_destroy_plan(inv);
  }
};

Fft2D::Fft2D(const Grid2D& grid) : impl_(std::make_unique<Impl>()) {
  if (!grid.fully_periodic()) throw SchemeError("spectral operations require a grid periodic in both axes");
  impl_->grid = grid;
  std::vector<cplx> a(grid.size()), b(grid.size());
  auto* pa = reinterpret_cast<fftw_complex*>(a.data());
  auto* pb = reinterpret_cast<fftw_complex*>(b.data());
  {
    std::lock_guard lock(plan_mutex());
    impl_->fwd = fftw_plan_dft_2d(grid.ny(), grid.nx(), pa, pb, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    impl_->inv = fftw_plan_dft_2d(grid.ny(), grid.nx(), pa, pb, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  impl_->kx = wavenumbers(grid.nx(), grid.length_x(), false);
  impl_->ky = wavenumbers(grid.ny(), grid.length_y(), false);
  impl_->kx_full = wavenumbers(grid.nx(), grid.length_x(), true);
  impl_->ky_full = wavenumbers(grid.ny(), grid.length_y(), true);
}

Fft2D::~Fft2D() = default;
Fft2D::Fft2D(Fft2D&&) noexcept = default;
Fft2D& Fft2D::operator=(Fft2D&&) noexcept = default;

const Grid2D& Fft2D::grid() const noexcept { return impl_->grid; }

void Fft2D::forward(std::span<const cplx> in, std::span<cplx> out) const {
  // FFTW's new-array execute does not write to its input for out-of-place c2c.
  fftw_execute_dft(impl_->fwd, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

void Fft2D::inverse(std::span<const cplx> in, std::span<cplx> out) const {
  fftw_execute_dft(impl_->inv, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / static_cast<double>(out.size());
  for (auto& v : out) v *= scale;
}

Wavenumber Fft2D::wavenumber(std::size_t i) const noexcept {
  const auto ix = static_cast<std::size_t>(impl_->grid.ix_of(i));
  const auto iy = static_cast<std::size_t>(impl_->grid.iy_of(i));
  return {impl_->kx[ix], impl_->ky[iy], impl_->kx_full[ix], impl_->ky_full[iy]};
}

ComplexField Fft2D::apply(const ComplexField& f, const std::function<cplx(const Wavenumber&)>& multiplier) const {
  const Grid2D& g = f.grid();
  if (g.nx() != impl_->grid.nx() || g.ny() != impl_->grid.ny() || g.length_x() != impl_->grid.length_x() ||
      g.length_y() != impl_->grid.length_y() || !g.fully_periodic())
    throw GridMismatchError("Fft2D::apply: field grid shape differs from transform grid");
  std::vector<cplx> spec(f.size());
  forward(f.values(), spec);
  for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= multiplier(wavenumber(i));
  ComplexField out(g);
  inverse(spec, out.values());
  out.merge_mask(f);
  return out;
}

const Fft2D& fft_for(const Grid2D& grid) {
  using Key = std::tuple<int, int, double, double>;
  static std::mutex cache_mutex;
  static std::map<Key, std::unique_ptr<Fft2D>> cache;
  const Key key{grid.nx(), grid.ny(), grid.length_x(), grid.length_y()};
  std::lock_guard lock(cache_mutex);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, std::make_unique<Fft2D>(grid)).first;
  return *it->second;
}

}  // namespace spinsurf
