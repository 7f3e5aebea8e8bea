#include "spinsurf/curvature.hpp"

#include <algorithm>
#include <cmath>

#include "spinsurf/parallel.hpp"

namespace spinsurf {
namespace {

using Vec = std::array<double, 4>;

double dot(const Vec& a, const Vec& b, int n) {
  double s = 0.0;
  for (int k = 0; k < n; ++k) s += a[k] * b[k];
  return s;
}

struct Stencil {
  Vec xu{}, xv{}, xuu{}, xuv{}, xvv{};
};

bool neighbour(const Grid2D& g, int ix, int iy, int dx, int dy, std::size_t& out) {
  int jx = ix + dx, jy = iy + dy;
  if (g.periodic_x()) jx = (jx + g.nx()) % g.nx();
  if (g.periodic_y()) jy = (jy + g.ny()) % g.ny();
  if (jx < 0 || jx >= g.nx() || jy < 0 || jy >= g.ny()) return false;
  out = g.index(jx, jy);
  return true;
}

bool build_stencil(const SurfaceMap& s, std::size_t i, Stencil& st) {
  const Grid2D& g = s.grid;
  const int ix = g.ix_of(i), iy = g.iy_of(i);
  std::size_t n[3][3];
  for (int dy = -1; dy <= 1; ++dy)
    for (int dx = -1; dx <= 1; ++dx) {
      if (!neighbour(g, ix, iy, dx, dy, n[dy + 1][dx + 1])) return false;
      if (s.is_singular(n[dy + 1][dx + 1])) return false;
    }
  const double hu = g.hx(), hv = g.hy();
  for (int k = 0; k < s.dim; ++k) {
    const auto& c = s.coords[k];
    auto at = [&](int dx, int dy) { return c[n[dy + 1][dx + 1]]; };
    st.xu[k] = (at(1, 0) - at(-1, 0)) / (2 * hu);
    st.xv[k] = (at(0, 1) - at(0, -1)) / (2 * hv);
    st.xuu[k] = (at(1, 0) - 2 * at(0, 0) + at(-1, 0)) / (hu * hu);
    st.xvv[k] = (at(0, 1) - 2 * at(0, 0) + at(0, -1)) / (hv * hv);
    st.xuv[k] = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4 * hu * hv);
  }
  return true;
}

}  // namespace

CurvatureField discrete_mean_curvature(const SurfaceMap& s) {
  const Grid2D& g = s.grid;
  const int n = s.dim;
  CurvatureField out{ComplexField(g), 0};
  std::vector<std::uint8_t> bad(g.size(), 0);
  parallel_for(g.size(), [&](std::size_t i) {
    Stencil st;
    if (!build_stencil(s, i, st)) {
      bad[i] = 1;
      return;
    }
    const double E = dot(st.xu, st.xu, n), F = dot(st.xu, st.xv, n), G = dot(st.xv, st.xv, n);
    const double det = E * G - F * F;
    if (!(det > 1e-14 * std::max(E, G) * std::max(E, G))) {
      bad[i] = 1;
      return;
    }
    // Mean curvature vector ½ g^{ij} (x_ij)^⊥.
    const double giuu = G / det, giuv = -F / det, givv = E / det;
    Vec trace{};
    for (int k = 0; k < n; ++k) trace[k] = giuu * st.xuu[k] + 2 * giuv * st.xuv[k] + givv * st.xvv[k];
    const double tu = dot(trace, st.xu, n), tv = dot(trace, st.xv, n);
    const double cu = giuu * tu + giuv * tv, cv = giuv * tu + givv * tv;
    Vec Hvec{};
    for (int k = 0; k < n; ++k) Hvec[k] = 0.5 * (trace[k] - cu * st.xu[k] - cv * st.xv[k]);
    const double mag = std::sqrt(dot(Hvec, Hvec, n));
    if (n == 3) {
      const Vec normal{st.xu[1] * st.xv[2] - st.xu[2] * st.xv[1], st.xu[2] * st.xv[0] - st.xu[0] * st.xv[2],
                       st.xu[0] * st.xv[1] - st.xu[1] * st.xv[0], 0.0};
      const double sign = dot(Hvec, normal, 3) < 0.0 ? -1.0 : 1.0;
      out.H[i] = sign * mag;
    } else {
      out.H[i] = mag;
    }
  });
  for (std::size_t i = 0; i < g.size(); ++i)
    if (bad[i]) {
      out.H.flag_singular(i);
      ++out.flagged;
    }
  return out;
}

double max_scaled_curvature(const SurfaceMap& s, const CurvatureField& c) {
  const Grid2D& g = s.grid;
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (c.H.is_singular(i)) continue;
    Stencil st;
    if (!build_stencil(s, i, st)) continue;
    const double E = dot(st.xu, st.xu, s.dim), F = dot(st.xu, st.xv, s.dim), G = dot(st.xv, st.xv, s.dim);
    const double ealpha = std::sqrt(std::sqrt(std::max(0.0, E * G - F * F)));
    worst = std::max(worst, std::abs(c.H[i].real()) * ealpha);
  }
  return worst;
}

}  // namespace spinsurf
