#include "spinsurf/surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spinsurf/error.hpp"
#include "spinsurf/parallel.hpp"

namespace spinsurf {
namespace {

constexpr cplx kI{0.0, 1.0};

bool interior(const Grid2D& g, std::size_t i, int margin) {
  const int ix = g.ix_of(i), iy = g.iy_of(i);
  const bool okx = g.periodic_x() || (ix >= margin && ix < g.nx() - margin);
  const bool oky = g.periodic_y() || (iy >= margin && iy < g.ny() - margin);
  return okx && oky;
}

}  // namespace

SurfaceMap::SurfaceMap(int dim_, const Grid2D& g) : dim(dim_), grid(g) {
  if (dim != 3 && dim != 4) throw ConfigError("SurfaceMap: ambient dimension must be 3 or 4");
  for (auto& c : coords) c.assign(g.size(), 0.0);
}

Point4 SurfaceMap::point(std::size_t i) const { return {coords[0][i], coords[1][i], coords[2][i], coords[3][i]}; }

void SurfaceMap::set_point(std::size_t i, const Point4& p) {
  for (int k = 0; k < 4; ++k) coords[k][i] = p[k];
}

void SurfaceMap::flag_singular(std::size_t i) {
  if (mask.empty()) mask.assign(grid.size(), 0);
  mask[i] = 1;
}

std::size_t SurfaceMap::singular_count() const noexcept {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
}

double SurfaceMap::diameter() const {
  Point4 lo, hi;
  lo.fill(std::numeric_limits<double>::infinity());
  hi.fill(-std::numeric_limits<double>::infinity());
  bool any = false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (is_singular(i)) continue;
    any = true;
    for (int k = 0; k < dim; ++k) {
      lo[k] = std::min(lo[k], coords[k][i]);
      hi[k] = std::max(hi[k], coords[k][i]);
    }
  }
  if (!any) return 0.0;
  double d2 = 0.0;
  for (int k = 0; k < dim; ++k) d2 += (hi[k] - lo[k]) * (hi[k] - lo[k]);
  return std::sqrt(d2);
}

ComplexField SurfaceMap::coordinate_field(int k) const {
  ComplexField f(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    f[i] = coords[k][i];
    if (is_singular(i)) f.flag_singular(i);
  }
  return f;
}

std::array<ComplexField, 3> r3_differentials(const SpinorField& psi) {
  const Grid2D& g = psi.grid();
  std::array<ComplexField, 3> xz{ComplexField(g), ComplexField(g), ComplexField(g)};
  parallel_for(g.size(), [&](std::size_t i) {
    const cplx p1 = psi.psi1[i], p2b = std::conj(psi.psi2[i]);
    xz[0][i] = 0.5 * kI * (p1 * p1 + p2b * p2b);
    xz[1][i] = 0.5 * (p2b * p2b - p1 * p1);
    xz[2][i] = p1 * p2b;
  });
  for (auto& f : xz) {
    f.merge_mask(psi.psi1);
    f.merge_mask(psi.psi2);
  }
  return xz;
}

std::array<ComplexField, 4> r4_differentials(const SpinorField& psi, const SpinorField& phi) {
  require_same_grid(psi.psi1, phi.psi1, "r4_differentials");
  const Grid2D& g = psi.grid();
  std::array<ComplexField, 4> xz{ComplexField(g), ComplexField(g), ComplexField(g), ComplexField(g)};
  parallel_for(g.size(), [&](std::size_t i) {
    const cplx p1 = psi.psi1[i], p2b = std::conj(psi.psi2[i]);
    const cplx f1 = phi.psi1[i], f2b = std::conj(phi.psi2[i]);
    xz[0][i] = 0.5 * kI * (f2b * p2b + f1 * p1);
    xz[1][i] = 0.5 * (f2b * p2b - f1 * p1);
    xz[2][i] = 0.5 * (f2b * p1 + f1 * p2b);
    xz[3][i] = 0.5 * kI * (f2b * p1 - f1 * p2b);
  });
  for (auto& f : xz)
    for (const ComplexField* s : {&psi.psi1, &psi.psi2, &phi.psi1, &phi.psi2}) f.merge_mask(*s);
  return xz;
}

SurfaceMap integrate_differentials(const std::vector<ComplexField>& xz, const IntegrationOptions& opts) {
  if (xz.size() != 3 && xz.size() != 4) throw ConfigError("integrate_differentials: need 3 or 4 differentials");
  const Grid2D& g = xz.front().grid();
  for (const auto& f : xz) require_same_grid(xz.front(), f, "integrate_differentials");
  SurfaceMap s(static_cast<int>(xz.size()), g);
  s.base_node = opts.base_node.value_or(g.nearest(0.0));
  if (!g.contains(s.base_node)) throw PathError("integrate_differentials: base node outside the grid");
  s.basepoint = opts.basepoint;
  double defect = 0.0;
  for (int k = 0; k < s.dim; ++k) {
    const Form1 form{xz[k], xz[k].conj()};
    const ComplexField a = primitive(form, s.base_node, PathOrder::x_first);
    const ComplexField b = primitive(form, s.base_node, PathOrder::y_first);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (a.is_singular(i) || b.is_singular(i)) {
        s.flag_singular(i);
        continue;
      }
      s.coords[k][i] = a[i].real() + opts.basepoint[k];
      defect = std::max(defect, std::abs(a[i] - b[i]));
    }
  }
  s.loop_defect = defect;
  if (!std::isfinite(defect) || defect > opts.loop_tol * std::max(1.0, s.diameter()))
    throw NotClosedError("surface integration: differentials are not closed (path-dependent result)", defect);
  return s;
}

SurfaceMap integrate_surface_r3(const SpinorField& psi, const IntegrationOptions& opts) {
  auto xz = r3_differentials(psi);
  return integrate_differentials({xz.begin(), xz.end()}, opts);
}

SurfaceMap integrate_surface_r4(const SpinorField& psi, const SpinorField& phi, const IntegrationOptions& opts) {
  auto xz = r4_differentials(psi, phi);
  return integrate_differentials({xz.begin(), xz.end()}, opts);
}

std::vector<ComplexField> coordinate_derivatives(const SurfaceMap& s, Scheme scheme) {
  std::vector<ComplexField> out;
  for (int k = 0; k < s.dim; ++k) out.push_back(wirtinger_derivative(s.coordinate_field(k), Direction::z, scheme));
  return out;
}

ComplexField induced_metric(const SurfaceMap& s, Scheme scheme) {
  const auto xz = coordinate_derivatives(s, scheme);
  ComplexField m(s.grid);
  for (const auto& f : xz) {
    for (std::size_t i = 0; i < m.size(); ++i) m[i] += 2.0 * std::norm(f[i]);
    m.merge_mask(f);
  }
  return m;
}

ComplexField spinor_metric_r3(const SpinorField& psi) {
  return zip(psi.psi1, psi.psi2, [](cplx a, cplx b) {
    const double e = std::norm(a) + std::norm(b);
    return cplx(e * e, 0.0);
  });
}

ComplexField spinor_metric_r4(const SpinorField& psi, const SpinorField& phi) {
  const ComplexField p = zip(psi.psi1, psi.psi2, [](cplx a, cplx b) { return cplx(std::norm(a) + std::norm(b)); });
  const ComplexField f = zip(phi.psi1, phi.psi2, [](cplx a, cplx b) { return cplx(std::norm(a) + std::norm(b)); });
  return p * f;
}

namespace {

double quadric_ratio(const std::vector<const ComplexField*>& xz, std::size_t i, double& norm2) {
  cplx sq{};
  norm2 = 0.0;
  for (const ComplexField* f : xz) {
    sq += (*f)[i] * (*f)[i];
    norm2 += std::norm((*f)[i]);
  }
  return norm2 > 0.0 ? std::abs(sq) / norm2 : 0.0;
}

}  // namespace

double conformality_residual(const SurfaceMap& s, int margin, Scheme scheme) {
  const auto xz = coordinate_derivatives(s, scheme);
  std::vector<const ComplexField*> ptrs;
  for (const auto& f : xz) ptrs.push_back(&f);
  double worst = 0.0;
  for (std::size_t i = 0; i < s.grid.size(); ++i) {
    if (!interior(s.grid, i, margin)) continue;
    if (std::any_of(xz.begin(), xz.end(), [i](const ComplexField& f) { return f.is_singular(i); })) continue;
    double n2;
    worst = std::max(worst, quadric_ratio(ptrs, i, n2));
  }
  return worst;
}

WillmoreResult willmore(const ComplexField& U, double decay_tol) {
  const Grid2D& g = U.grid();
  const ComplexField rho = U.abs2();
  WillmoreResult r;
  r.value = 4.0 * integrate2d(rho, MaskPolicy::skip).real();
  const double peak = rho.max_abs();
  double edge = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (rho.is_singular(i)) continue;
    const int ix = g.ix_of(i), iy = g.iy_of(i);
    const bool on_x_edge = !g.periodic_x() && (ix == 0 || ix == g.nx() - 1);
    const bool on_y_edge = !g.periodic_y() && (iy == 0 || iy == g.ny() - 1);
    if (on_x_edge || on_y_edge) edge = std::max(edge, rho[i].real());
  }
  r.boundary_ratio = peak > 0.0 ? edge / peak : 0.0;
  r.truncated = r.boundary_ratio > decay_tol;
  const double R = 0.5 * std::min(g.periodic_x() ? std::numeric_limits<double>::infinity() : g.length_x(),
                                  g.periodic_y() ? std::numeric_limits<double>::infinity() : g.length_y());
  r.tail_estimate = std::isfinite(R) ? 4.0 * M_PI * edge * R * R : 0.0;
  return r;
}

namespace {

GaussMap gauss_from(const std::vector<ComplexField>& xz) {
  GaussMap gm;
  gm.dim = static_cast<int>(xz.size());
  const Grid2D& g = xz.front().grid();
  for (int k = 0; k < 4; ++k) gm.point[k] = ComplexField(g);
  std::vector<const ComplexField*> ptrs;
  for (const auto& f : xz) ptrs.push_back(&f);
  double scale = 0.0;
  for (const auto& f : xz) scale = std::max(scale, f.max_abs());
  for (std::size_t i = 0; i < g.size(); ++i) {
    double n2;
    const bool masked = std::any_of(xz.begin(), xz.end(), [i](const ComplexField& f) { return f.is_singular(i); });
    const double ratio = masked ? 0.0 : quadric_ratio(ptrs, i, n2);
    if (masked || n2 <= 1e-24 * scale * scale) {
      for (auto& p : gm.point) p.flag_singular(i);
      ++gm.degenerate;
      continue;
    }
    const double n = std::sqrt(n2);
    for (int k = 0; k < gm.dim; ++k) gm.point[k][i] = xz[k][i] / n;
    gm.quadric_residual = std::max(gm.quadric_residual, ratio);
  }
  return gm;
}

}  // namespace

GaussMap gauss_map(const SurfaceMap& s, Scheme scheme) { return gauss_from(coordinate_derivatives(s, scheme)); }

GaussMap gauss_map(const std::vector<ComplexField>& xz) {
  if (xz.size() != 3 && xz.size() != 4) throw ConfigError("gauss_map: need 3 or 4 components");
  return gauss_from(xz);
}

std::array<cplx, 2> quadric_preimage(const std::array<cplx, 3>& x) {
  const cplx a2 = -kI * x[0] - x[1];
  const cplx b2 = -kI * x[0] + x[1];
  cplx a, b;
  if (std::abs(a2) >= std::abs(b2)) {
    a = std::sqrt(a2);
    b = a == cplx{} ? cplx{} : x[2] / a;
  } else {
    b = std::sqrt(b2);
    a = x[2] / b;
  }
  const double n = std::sqrt(std::norm(a) + std::norm(b));
  if (n == 0.0) throw DomainError("quadric_preimage: zero point");
  return {a / n, b / n};
}

Mat2 point_to_quaternion(const Point4& x) { return Mat2::quaternion({x[3], x[2]}, {x[0], -x[1]}); }

Point4 quaternion_to_point(const Mat2& q) {
  // a = m11 = x4 + i x3, b = m21 = x1 - i x2
  return {q.m21.real(), -q.m21.imag(), q.m11.imag(), q.m11.real()};
}

SurfaceMap invert_surface(const SurfaceMap& s) {
  SurfaceMap out(4, s.grid);
  out.base_node = s.base_node;
  out.mask = s.mask;
  const double eps = 1e-9 * s.diameter();
  for (std::size_t i = 0; i < s.grid.size(); ++i) {
    if (s.is_singular(i)) continue;
    Point4 x = s.point(i);
    if (s.dim == 3) x[3] = 0.0;
    const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
    if (std::sqrt(r2) <= eps || r2 == 0.0) {
      out.flag_singular(i);
      out.set_point(i, {std::nan(""), std::nan(""), std::nan(""), std::nan("")});
      continue;
    }
    out.set_point(i, quaternion_to_point(point_to_quaternion(x).inverse()));
  }
  const Point4 b = s.basepoint;
  const double rb = b[0] * b[0] + b[1] * b[1] + b[2] * b[2] + b[3] * b[3];
  out.basepoint = rb > 0.0 ? Point4{-b[0] / rb, -b[1] / rb, -b[2] / rb, b[3] / rb} : Point4{};
  return out;
}

}  // namespace spinsurf
