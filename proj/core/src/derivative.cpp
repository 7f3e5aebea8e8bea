#include "spinsurf/derivative.hpp"

#include "spinsurf/error.hpp"
#include "spinsurf/fft.hpp"
#include "spinsurf/parallel.hpp"

namespace spinsurf {
namespace {

constexpr cplx kI{0.0, 1.0};

enum class Axis { x, y };

// Flags every node whose 3-point stencil along `axis` touches a singular node.
void propagate_mask(const ComplexField& in, ComplexField& out, Axis axis) {
  if (!in.has_singular()) return;
  const Grid2D& g = in.grid();
  for (int iy = 0; iy < g.ny(); ++iy) {
    for (int ix = 0; ix < g.nx(); ++ix) {
      if (!in.is_singular(g.index(ix, iy))) continue;
      for (int d = -2; d <= 2; ++d) {
        int jx = ix, jy = iy;
        if (axis == Axis::x) {
          jx += d;
          if (g.periodic_x()) jx = (jx + g.nx()) % g.nx();
        } else {
          jy += d;
          if (g.periodic_y()) jy = (jy + g.ny()) % g.ny();
        }
        if (jx >= 0 && jx < g.nx() && jy >= 0 && jy < g.ny()) out.flag_singular(g.index(jx, jy));
      }
    }
  }
}

ComplexField central_diff(const ComplexField& f, Axis axis) {
  const Grid2D& g = f.grid();
  const int n = axis == Axis::x ? g.nx() : g.ny();
  const bool periodic = axis == Axis::x ? g.periodic_x() : g.periodic_y();
  const double h = axis == Axis::x ? g.hx() : g.hy();
  const double inv2h = 1.0 / (2.0 * h);
  ComplexField out(g);
  auto at = [&](int ix, int iy, int k) -> cplx {
    return axis == Axis::x ? f(k, iy) : f(ix, k);
  };
  parallel_for(g.size(), [&](std::size_t i) {
    const int ix = g.ix_of(i);
    const int iy = g.iy_of(i);
    const int k = axis == Axis::x ? ix : iy;
    cplx d;
    if (periodic) {
      d = (at(ix, iy, (k + 1) % n) - at(ix, iy, (k - 1 + n) % n)) * inv2h;
    } else if (k == 0) {
      d = (-3.0 * at(ix, iy, 0) + 4.0 * at(ix, iy, 1) - at(ix, iy, 2)) * inv2h;
    } else if (k == n - 1) {
      d = (3.0 * at(ix, iy, n - 1) - 4.0 * at(ix, iy, n - 2) + at(ix, iy, n - 3)) * inv2h;
    } else {
      d = (at(ix, iy, k + 1) - at(ix, iy, k - 1)) * inv2h;
    }
    out[i] = d;
  });
  propagate_mask(f, out, axis);
  return out;
}

void require_spectral(const ComplexField& f) {
  if (!f.grid().fully_periodic()) throw SchemeError("spectral differentiation requires a fully periodic grid");
  if (f.has_singular()) throw MaskError("spectral differentiation of a field with singular nodes");
}

}  // namespace

ComplexField partial_x(const ComplexField& f, Scheme scheme) {
  if (scheme == Scheme::central2) return central_diff(f, Axis::x);
  require_spectral(f);
  return fft_for(f.grid()).apply(f, [](const Wavenumber& k) { return kI * k.kx; });
}

ComplexField partial_y(const ComplexField& f, Scheme scheme) {
  if (scheme == Scheme::central2) return central_diff(f, Axis::y);
  require_spectral(f);
  return fft_for(f.grid()).apply(f, [](const Wavenumber& k) { return kI * k.ky; });
}

ComplexField wirtinger_derivative(const ComplexField& f, Direction direction, Scheme scheme) {
  const double sign = direction == Direction::z ? -1.0 : 1.0;
  if (scheme == Scheme::spectral) {
    require_spectral(f);
    // ∂x -> i kx, ∂y -> i ky; ∂ = (∂x - i∂y)/2, ∂̄ = (∂x + i∂y)/2.
    return fft_for(f.grid()).apply(f, [sign](const Wavenumber& k) { return 0.5 * (kI * k.kx + sign * kI * kI * k.ky); });
  }
  ComplexField fx = central_diff(f, Axis::x);
  const ComplexField fy = central_diff(f, Axis::y);
  for (std::size_t i = 0; i < fx.size(); ++i) fx[i] = 0.5 * (fx[i] + sign * kI * fy[i]);
  fx.merge_mask(fy);
  return fx;
}

ComplexField wirtinger_second(const ComplexField& f, Direction first, Direction second, Scheme scheme) {
  if (scheme == Scheme::spectral) {
    require_spectral(f);
    const double s1 = first == Direction::z ? -1.0 : 1.0;
    const double s2 = second == Direction::z ? -1.0 : 1.0;
    if (s1 != s2) {
      // ∂∂̄ = Δ/4.
      return fft_for(f.grid()).apply(f, [](const Wavenumber& k) {
        return cplx(-0.25 * (k.kx_full * k.kx_full + k.ky_full * k.ky_full), 0.0);
      });
    }
    // ∂² and ∂̄² = (∂x² ∓ 2i ∂x∂y - ∂y²)/4; the mixed term uses Nyquist-zeroed k.
    return fft_for(f.grid()).apply(f, [s1](const Wavenumber& k) {
      return cplx(0.25 * (-k.kx_full * k.kx_full + k.ky_full * k.ky_full), -0.5 * s1 * k.kx * k.ky);
    });
  }
  return wirtinger_derivative(wirtinger_derivative(f, first, scheme), second, scheme);
}

}  // namespace spinsurf
