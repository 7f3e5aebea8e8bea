#include "spinsurf/dsii.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "spinsurf/error.hpp"
#include "spinsurf/fft.hpp"
#include "spinsurf/parallel.hpp"
#include "spinsurf/quadrature.hpp"

namespace spinsurf {
namespace {

constexpr cplx kI{0.0, 1.0};

/// f(·, t) with c bound, as coefficients of z^k.
struct ZPoly {
  std::vector<cplx> c;

  cplx operator()(cplx z) const {
    cplx s{};
    for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * z + *it;
    return s;
  }
  ZPoly derivative() const {
    ZPoly d;
    for (std::size_t k = 1; k < c.size(); ++k) d.c.push_back(c[k] * static_cast<double>(k));
    return d;
  }
};

ZPoly restrict_to_z(const BiPoly& f, double t, cplx c) {
  const BiPoly g = f.bind_parameter(c).bind(Var::t, t);
  ZPoly p;
  p.c.assign(static_cast<std::size_t>(g.degree(Var::z)) + 1, cplx{});
  for (const auto& [key, coeff] : g.terms()) p.c[BiPoly::unpack(key)[0]] += coeff;
  return p;
}

struct Jet {
  ZPoly f, fp, fpp;
};

Jet make_jet(const BiPoly& f, double t, cplx c) {
  Jet j{restrict_to_z(f, t, c), {}, {}};
  j.fp = j.f.derivative();
  j.fpp = j.fp.derivative();
  return j;
}

cplx U_from_jet(const Jet& j, cplx z) {
  const cplx f = j.f(z), fp = j.fp(z);
  return kI * (z * fp - f) / (std::norm(z) + std::norm(f));
}

cplx V_from_jet(const Jet& j, cplx z) {
  const cplx f = j.f(z), fp = j.fp(z), fpp = j.fpp(z);
  const double d = std::norm(z) + std::norm(f);
  const cplx w = std::conj(z) + std::conj(f) * fp;
  return 2.0 * (std::conj(f) * fpp / d - w * w / (d * d));
}

}  // namespace

cplx ExactSolution::U_at(cplx z, double t, cplx c) const { return U_from_jet(make_jet(f, t, c), z); }
cplx ExactSolution::V_at(cplx z, double t, cplx c) const { return V_from_jet(make_jet(f, t, c), z); }

std::function<cplx(cplx)> ExactSolution::U_sampler(double t, cplx c) const {
  return [j = make_jet(f, t, c)](cplx z) { return U_from_jet(j, z); };
}

std::function<cplx(cplx)> ExactSolution::V_sampler(double t, cplx c) const {
  return [j = make_jet(f, t, c)](cplx z) { return V_from_jet(j, z); };
}

double ExactSolution::denominator_at(cplx z, double t, cplx c) const {
  return std::norm(z) + std::norm(restrict_to_z(f, t, c)(z));
}

ExactSolution exact_solution(const BiPoly& f, std::string name) {
  if (f.depends_on(Var::zbar)) throw DomainError("exact_solution: f must be holomorphic in z");
  if (!heat_residual(f).is_identically_zero(std::max(1.0, f.max_abs_coefficient())))
    throw DomainError("exact_solution: f does not satisfy f_t = i f_zz");
  const BiPoly z = BiPoly::var(Var::z), zb = BiPoly::var(Var::zbar);
  const BiPoly fp = f.derivative(Var::z), fb = f.conj();
  const BiPoly delta = z * zb + f * fb;
  ExactSolution s;
  s.name = std::move(name);
  s.f = f;
  s.U = RationalFn(kI * (z * fp - f), delta);
  s.a = RationalFn(cplx(0.0, -1.0) * (zb + fb * fp), delta);
  s.V = kI * 2.0 * s.a.derivative(Var::z);
  return s;
}

BiPoly s1_datum() { return heat_extend(BiPoly::var(Var::z, 2) + BiPoly::var(Var::c)); }
BiPoly s2_datum() { return heat_extend(BiPoly::var(Var::z, 4) + BiPoly::var(Var::c)); }

ExactSolution catalog(const std::string& name, std::optional<cplx> c) {
  BiPoly f;
  if (name == "s1")
    f = s1_datum();
  else if (name == "s2")
    f = s2_datum();
  else
    throw DomainError("catalog: unknown solution '" + name + "' (expected s1 or s2)");
  if (c) f = f.bind_parameter(*c);
  return exact_solution(f, name);
}

RationalFn s1_displayed_V() {
  const BiPoly z = BiPoly::var(Var::z), zb = BiPoly::var(Var::zbar);
  const BiPoly t = BiPoly::var(Var::t), c = BiPoly::var(Var::c), cb = BiPoly::var(Var::cbar);
  const BiPoly f = z * z + cplx(0.0, 2.0) * t + c;
  const BiPoly fb = zb * zb - cplx(0.0, 2.0) * t + cb;
  const BiPoly delta = z * zb + f * fb;
  const BiPoly w = 2.0 * z * fb + zb;
  return RationalFn(4.0 * fb, delta) - RationalFn(2.0 * w * w, delta, 2);
}

ComplexField ozawa_initial(const Grid2D& g, double a, double b) {
  if (a == 0.0) throw DomainError("ozawa_initial: a must be nonzero");
  ComplexField U(g);
  parallel_for(g.size(), [&](std::size_t i) {
    const cplx p = g.z(i);
    const double X = p.real(), Y = p.imag();
    const double phase = -b * (X * X - Y * Y) / (4.0 * a);
    U[i] = std::polar(1.0, phase) / (a * (1.0 + ((X / a) * (X / a) + (Y / a) * (Y / a)) / 2.0));
  });
  return U;
}

ComplexField to_half_potential(const ComplexField& V) { return V * cplx(0.5); }
RationalFn to_half_potential(const RationalFn& V) { return V * cplx(0.5); }

bool SymbolicResidual::zero() const {
  return evolution.is_identically_zero(scale) && constraint.is_identically_zero(scale);
}

namespace {

/// Sum of same-base terms with the largest lifted numerator coefficient.
std::pair<BiPoly, double> lifted_sum(const std::vector<RationalFn>& terms) {
  const BiPoly& base = terms.front().base();
  int power = 0;
  bool same = true;
  for (const auto& t : terms) {
    power = std::max(power, t.power());
    if (t.power() > 0 && !(t.base() == base)) same = false;
  }
  if (!same) {
    RationalFn sum;
    for (const auto& t : terms) sum += t;
    return {sum.num(), std::max(1.0, sum.num().max_abs_coefficient())};
  }
  BiPoly sum;
  double scale = 1.0;
  for (const auto& t : terms) {
    const BiPoly lifted = t.num() * base.pow(power - t.power());
    scale = std::max(scale, lifted.max_abs_coefficient());
    sum += lifted;
  }
  return {sum, scale};
}

}  // namespace

SymbolicResidual dsii_symbolic_residual(const RationalFn& U, const RationalFn& V, DsiiNormalization norm) {
  const double k = norm == DsiiNormalization::full_potential ? 1.0 : 2.0;
  const double m = norm == DsiiNormalization::full_potential ? 2.0 : 1.0;
  const RationalFn Ut = U.derivative(Var::t);
  const RationalFn Uzz = U.derivative(Var::z).derivative(Var::z);
  const RationalFn Uzbzb = U.derivative(Var::zbar).derivative(Var::zbar);
  const RationalFn coupling = (V + V.conj()) * U;
  auto [evo, s1] = lifted_sum({Ut, cplx(0.0, -1.0) * Uzz, cplx(0.0, -1.0) * Uzbzb, cplx(0.0, -k) * coupling});
  const RationalFn rho = U * U.conj();
  auto [con, s2] = lifted_sum({V.derivative(Var::zbar), cplx(-m) * rho.derivative(Var::z)});
  SymbolicResidual r;
  r.evolution = std::move(evo);
  r.constraint = std::move(con);
  r.scale = std::max(s1, s2);
  r.exact = r.evolution.integral() && r.constraint.integral();
  return r;
}

ResidualNorms dsii_residual(const std::array<const ComplexField*, 3>& U, const ComplexField& V, double dt,
                            Scheme scheme, int margin) {
  require_same_grid(*U[0], *U[1], "dsii_residual");
  require_same_grid(*U[1], *U[2], "dsii_residual");
  require_same_grid(*U[1], V, "dsii_residual");
  if (!(dt > 0.0)) throw ConfigError("dsii_residual: dt must be positive");
  const ComplexField& u = *U[1];
  const ComplexField uzz = wirtinger_second(u, Direction::z, Direction::z, scheme);
  const ComplexField ubb = wirtinger_second(u, Direction::zbar, Direction::zbar, scheme);
  ComplexField r(u.grid());
  parallel_for(r.size(), [&](std::size_t i) {
    const cplx ut = ((*U[2])[i] - (*U[0])[i]) / (2.0 * dt);
    r[i] = ut - kI * (uzz[i] + ubb[i] + 2.0 * V[i].real() * u[i]);
  });
  for (const ComplexField* f : {U[0], U[1], U[2], &V, &uzz, &ubb}) r.merge_mask(*f);
  const Grid2D& g = r.grid();
  ComplexField sq(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const int ix = g.ix_of(i), iy = g.iy_of(i);
    const bool inside = (g.periodic_x() || (ix >= margin && ix < g.nx() - margin)) &&
                        (g.periodic_y() || (iy >= margin && iy < g.ny() - margin));
    if (inside && !r.is_singular(i)) sq[i] = std::norm(r[i]);
  }
  return {r.max_abs_interior(margin), std::sqrt(integrate2d(sq).real())};
}

ComplexField v_from_u(const ComplexField& U) {
  const Grid2D& g = U.grid();
  if (!g.fully_periodic()) throw SchemeError("v_from_u: needs a fully periodic grid");
  if (U.has_singular()) throw MaskError("v_from_u: field has singular nodes");
  return fft_for(g).apply(U.abs2(), [](const Wavenumber& k) -> cplx {
    const cplx den(-k.ky, k.kx);  // i kx - ky
    if (den == cplx{}) return 0.0;
    return 2.0 * cplx(k.ky, k.kx) / den;  // 2(i kx + ky)/(i kx - ky)
  });
}

ComplexField to_physical(const ComplexField& f) {
  const Grid2D& g = f.grid();
  const Bounds& b = g.bounds();
  const Grid2D p = make_grid({2 * b.y_min, 2 * b.y_max, 2 * b.x_min, 2 * b.x_max}, {g.ny(), g.nx()},
                             {g.periodic_y(), g.periodic_x()});
  ComplexField out(p);
  for (int iy = 0; iy < g.ny(); ++iy)
    for (int ix = 0; ix < g.nx(); ++ix) {
      out(iy, ix) = f(ix, iy);
      if (f.is_singular(g.index(ix, iy))) out.flag_singular(p.index(iy, ix));
    }
  return out;
}

ComplexField from_physical(const ComplexField& f) {
  const Grid2D& p = f.grid();
  const Bounds& b = p.bounds();
  const Grid2D g = make_grid({b.y_min / 2, b.y_max / 2, b.x_min / 2, b.x_max / 2}, {p.ny(), p.nx()},
                             {p.periodic_y(), p.periodic_x()});
  ComplexField out(g);
  for (int iY = 0; iY < p.ny(); ++iY)
    for (int iX = 0; iX < p.nx(); ++iX) {
      out(iY, iX) = f(iX, iY);
      if (f.is_singular(p.index(iX, iY))) out.flag_singular(g.index(iY, iX));
    }
  return out;
}

namespace {

PhysicalForm physical_core(const ComplexField& U) {
  if (!U.grid().fully_periodic()) throw SchemeError("physical_form: needs a fully periodic grid");
  PhysicalForm out;
  out.U = to_physical(U) * cplx(1.0 / std::sqrt(2.0));
  const Fft2D& fft = fft_for(out.U.grid());
  const ComplexField rho = out.U.abs2();
  const ComplexField rhs = fft.apply(rho, [](const Wavenumber& k) { return cplx(0.0, k.kx); });
  double mean = 0.0, peak = rhs.max_abs();
  for (std::size_t i = 0; i < rhs.size(); ++i) mean += rhs[i].real();
  mean /= static_cast<double>(rhs.size());
  if (std::abs(mean) > 1e-8 * std::max(peak, 1e-300))
    throw DomainError("physical_form: Poisson right-hand side does not have zero mean");
  out.phi = fft.apply(rho, [](const Wavenumber& k) -> cplx {
    const double k2 = k.kx_full * k.kx_full + k.ky_full * k.ky_full;
    if (k2 == 0.0) return 0.0;
    return cplx(0.0, k.kx) / -k2;
  });
  for (std::size_t i = 0; i < out.phi.size(); ++i) out.phi[i] = out.phi[i].real();
  const ComplexField phiX = fft.apply(out.phi, [](const Wavenumber& k) { return cplx(0.0, k.kx); });
  const ComplexField rev = to_physical(v_from_u(U).real_part());
  std::vector<double> diff(rev.size());
  double offset = 0.0;
  for (std::size_t i = 0; i < rev.size(); ++i) {
    diff[i] = rev[i].real() - (4.0 * rho[i].real() - 8.0 * phiX[i].real());
    offset += diff[i];
  }
  offset /= static_cast<double>(diff.size());
  for (double d : diff) out.rev_mismatch = std::max(out.rev_mismatch, std::abs(d - offset));
  return out;
}

}  // namespace

PhysicalForm physical_form(const ComplexField& U) { return physical_core(U); }

PhysicalForm physical_form(const std::array<const ComplexField*, 3>& U, double dt, double window) {
  require_same_grid(*U[0], *U[1], "physical_form");
  require_same_grid(*U[1], *U[2], "physical_form");
  PhysicalForm out = physical_core(*U[1]);
  const ComplexField prev = to_physical(*U[0]) * cplx(1.0 / std::sqrt(2.0));
  const ComplexField next = to_physical(*U[2]) * cplx(1.0 / std::sqrt(2.0));
  const Fft2D& fft = fft_for(out.U.grid());
  const ComplexField lin = fft.apply(out.U, [](const Wavenumber& k) {
    return cplx(k.kx_full * k.kx_full - k.ky_full * k.ky_full);  // -U_XX + U_YY
  });
  const ComplexField phiX = fft.apply(out.phi, [](const Wavenumber& k) { return cplx(0.0, k.kx); });
  const double dT = 2.0 * dt;
  double worst = 0.0;
  const Grid2D& p = out.U.grid();
  const Bounds& b = p.bounds();
  const cplx centre(0.5 * (b.x_min + b.x_max), 0.5 * (b.y_min + b.y_max));
  const double wx = 0.5 * window * (b.x_max - b.x_min), wy = 0.5 * window * (b.y_max - b.y_min);
  for (std::size_t i = 0; i < lin.size(); ++i) {
    const cplx d = p.z(i) - centre;
    if (std::abs(d.real()) > wx || std::abs(d.imag()) > wy) continue;
    const cplx u = out.U[i];
    const cplx uT = (next[i] - prev[i]) / (2.0 * dT);
    const cplx r = kI * uT + lin[i] + 4.0 * std::norm(u) * u - 8.0 * phiX[i].real() * u;
    worst = std::max(worst, std::abs(r));
  }
  out.ozeq_residual = worst;
  return out;
}

std::vector<SingularEvent> singular_times(const ExactSolution& sol) {
  if (sol.f.has_parameters()) throw DomainError("singular_times: bind the parameter c first");
  const BiPoly at0 = sol.f.bind(Var::z, 0.0);
  const int n = at0.degree(Var::t);
  std::vector<cplx> p(static_cast<std::size_t>(n) + 1, cplx{});
  for (const auto& [key, coeff] : at0.terms()) p[BiPoly::unpack(key)[2]] += coeff;
  if (at0.is_zero()) throw DomainError("singular_times: f(0, t) vanishes identically");
  std::vector<double> roots;
  if (n >= 1) {
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(n, n);
    for (int k = 1; k < n; ++k) C(k, k - 1) = 1.0;
    for (int k = 0; k < n; ++k) C(k, n - 1) = -p[k] / p[n];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
    auto eval = [&](cplx t) {
      cplx s{}, d{};
      for (int k = n; k >= 0; --k) {
        d = d * t + s;
        s = s * t + p[k];
      }
      return std::pair{s, d};
    };
    for (int k = 0; k < n; ++k) {
      cplx r = es.eigenvalues()[k];
      if (std::abs(r.imag()) > 1e-10 * std::max(1.0, std::abs(r))) continue;
      double t = r.real();
      for (int it = 0; it < 4; ++it) {
        const auto [s, d] = eval(t);
        if (d == cplx{}) break;
        t -= (s / d).real();
      }
      if (std::none_of(roots.begin(), roots.end(), [&](double q) { return std::abs(q - t) <= 1e-9 * std::max(1.0, std::abs(t)); }))
        roots.push_back(t);
    }
  }
  std::sort(roots.begin(), roots.end());
  std::vector<SingularEvent> events;
  for (double t : roots) {
    const BiPoly ft = sol.f.bind(Var::t, t);
    const cplx f1 = ft.derivative(Var::z).eval(0.0, 0.0);
    const cplx f2 = 0.5 * ft.derivative(Var::z).derivative(Var::z).eval(0.0, 0.0);
    events.push_back({t, 0.0, kI * f2 / (1.0 + std::norm(f1))});
  }
  return events;
}

cplx radial_limit_fit(const ExactSolution& sol, double t, cplx c, double r0) {
  const auto U = sol.U_sampler(t, c);
  constexpr int kAngles = 64;
  auto ring = [&](double r) {
    cplx s{};
    for (int k = 0; k < kAngles; ++k) {
      const double phi = 2.0 * M_PI * (k + 0.5) / kAngles;
      s += U(std::polar(r, phi)) * std::polar(1.0, -2.0 * phi);
    }
    return s / static_cast<double>(kAngles);
  };
  return 2.0 * ring(0.5 * r0) - ring(r0);
}

namespace {

struct BoxIntegral {
  double value = 0.0;
  double edge_max = 0.0;
  std::size_t masked = 0;
};

// |U|² at a masked node as its mean over a tiny circle.
double ring_limit(const std::function<cplx(cplx)>& U, cplx z0, double r) {
  constexpr int kAngles = 16;
  double s = 0.0;
  for (int k = 0; k < kAngles; ++k) s += std::norm(U(z0 + std::polar(r, 2.0 * M_PI * (k + 0.5) / kAngles)));
  return s / kAngles;
}

BoxIntegral box_integral(const std::function<cplx(cplx)>& U, double L, double h) {
  const int n = static_cast<int>(std::lround(2.0 * L / h)) + 1;
  const Grid2D g = make_grid({-L, L, -L, L}, {n, n});
  ComplexField rho(g);
  parallel_for(g.size(), [&](std::size_t i) { rho[i] = std::norm(U(g.z(i))); });
  BoxIntegral out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!std::isfinite(rho[i].real())) {
      ++out.masked;
      rho[i] = ring_limit(U, g.z(i), 1e-6 * h);
      if (!std::isfinite(rho[i].real())) rho.flag_singular(i);
      continue;
    }
    if (g.on_boundary(g.ix_of(i), g.iy_of(i))) out.edge_max = std::max(out.edge_max, rho[i].real());
  }
  out.value = integrate2d(rho, MaskPolicy::skip).real();
  return out;
}

}  // namespace

NormResult l2_norm_sq(const std::function<cplx(cplx)>& U, const NormOptions& opts) {
  const BoxIntegral inner = box_integral(U, opts.half_width, opts.h);
  const BoxIntegral outer = box_integral(U, 2.0 * opts.half_width, opts.h);
  NormResult r;
  r.box_value = inner.value;
  r.double_box_value = outer.value;
  r.masked = outer.masked;
  r.decay_ratio = inner.edge_max > 0.0 ? outer.edge_max / inner.edge_max : 0.0;
  if (r.decay_ratio > opts.decay_limit)
    throw DecayError("l2_norm_sq: |U|² does not decay fast enough for the tail extrapolation");
  r.value = (4.0 * outer.value - inner.value) / 3.0;
  return r;
}

double l2_norm_sq(const ComplexField& U) { return integrate2d(U.abs2(), MaskPolicy::skip).real(); }

}  // namespace spinsurf
