#include "spinsurf/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "spinsurf/error.hpp"
#include "spinsurf/grid.hpp"
#include "spinsurf/parallel.hpp"

namespace spinsurf {
namespace {

ComplexField third(const ComplexField& f, Direction d, Scheme scheme) {
  return wirtinger_derivative(wirtinger_second(f, d, d, scheme), d, scheme);
}

void check_slices(const std::array<const ComplexField*, 3>& U, const ComplexField& V, double dt) {
  for (const ComplexField* u : U) require_same_grid(*u, V, "flow residual");
  if (!(dt > 0.0)) throw ConfigError("flow residual: dt must be positive");
}

double evolution_residual(const std::array<const ComplexField*, 3>& U, const ComplexField& rhs, double dt,
                          int margin) {
  ComplexField r = (*U[2] - *U[0]) * cplx(1.0 / (2.0 * dt)) - rhs;
  r.merge_mask(rhs);
  return r.max_abs_interior(margin);
}

}  // namespace

double Potential1D::h() const {
  if (values.size() < 2) throw ConfigError("Potential1D: needs at least two samples");
  const double n = static_cast<double>(values.size());
  return (x_max - x_min) / (periodic ? n : n - 1.0);
}

double Potential1D::x(std::size_t i) const { return x_min + static_cast<double>(i) * h(); }

std::string Potential1D::name() const {
  switch (kind) {
    case PotentialKind::soliton:
      return "soliton(" + std::to_string(n) + ")";
    case PotentialKind::clifford:
      return "clifford";
    case PotentialKind::custom:
      break;
  }
  return "custom";
}

Potential1D Potential1D::soliton(int N, double half_width, std::size_t samples) {
  if (N < 0) throw ConfigError("soliton: N must be non-negative");
  Potential1D p = custom([N](double x) { return N / (2.0 * std::cosh(x)); }, -half_width, half_width, samples);
  p.kind = PotentialKind::soliton;
  p.n = N;
  return p;
}

Potential1D Potential1D::clifford(std::size_t samples) {
  const double r2 = std::numbers::sqrt2;
  Potential1D p = custom([r2](double x) { return std::sin(x) / (2.0 * r2 * (std::sin(x) - r2)); }, 0.0,
                         2.0 * std::numbers::pi, samples, true);
  p.kind = PotentialKind::clifford;
  return p;
}

Potential1D Potential1D::custom(std::function<double(double)> u, double x_min, double x_max, std::size_t samples,
                                bool periodic) {
  if (samples < 5) throw ConfigError("Potential1D: needs at least five samples");
  if (!(x_max > x_min)) throw ConfigError("Potential1D: empty interval");
  Potential1D p;
  p.x_min = x_min;
  p.x_max = x_max;
  p.periodic = periodic;
  p.values.resize(samples);
  for (std::size_t i = 0; i < samples; ++i) p.values[i] = u(p.x(i));
  return p;
}

Potential1D potential_from_name(const std::string& name, int N, std::size_t samples) {
  if (name == "soliton") return Potential1D::soliton(N, 25.0, samples);
  if (name == "clifford") return Potential1D::clifford(samples);
  throw ConfigError("unknown potential '" + name + "' (expected soliton or clifford)");
}

ComplexField mnv_rhs(const ComplexField& U, const ComplexField& V, Scheme scheme) {
  require_same_grid(U, V, "mnv_rhs");
  const ComplexField Vb = V.conj();
  ComplexField r = third(U, Direction::z, scheme) + third(U, Direction::zbar, scheme) +
                   wirtinger_derivative(U, Direction::z, scheme) * V * cplx(3.0) +
                   U * wirtinger_derivative(V, Direction::z, scheme) * cplx(1.5) +
                   wirtinger_derivative(U, Direction::zbar, scheme) * Vb * cplx(3.0) +
                   U * wirtinger_derivative(Vb, Direction::zbar, scheme) * cplx(1.5);
  return r;
}

ComplexField nv_rhs(const ComplexField& U, const ComplexField& V, Scheme scheme) {
  require_same_grid(U, V, "nv_rhs");
  return third(U, Direction::z, scheme) + third(U, Direction::zbar, scheme) +
         wirtinger_derivative(V * U, Direction::z, scheme) + wirtinger_derivative(V.conj() * U, Direction::zbar, scheme);
}

FlowResidual mnv_residual(const std::array<const ComplexField*, 3>& U, const ComplexField& V, double dt,
                          Scheme scheme, int margin) {
  check_slices(U, V, dt);
  const ComplexField& u = *U[1];
  FlowResidual out;
  out.evolution = evolution_residual(U, mnv_rhs(u, V, scheme), dt, margin);
  ComplexField c = wirtinger_derivative(V, Direction::zbar, scheme) - wirtinger_derivative(u * u, Direction::z, scheme);
  out.constraint = c.max_abs_interior(margin);
  return out;
}

FlowResidual nv_residual(const std::array<const ComplexField*, 3>& U, const ComplexField& V, double dt, Scheme scheme,
                         int margin) {
  check_slices(U, V, dt);
  const ComplexField& u = *U[1];
  FlowResidual out;
  out.evolution = evolution_residual(U, nv_rhs(u, V, scheme), dt, margin);
  ComplexField c = wirtinger_derivative(V, Direction::zbar, scheme) -
                   wirtinger_derivative(u, Direction::z, scheme) * cplx(3.0);
  out.constraint = c.max_abs_interior(margin);
  return out;
}

ComplexField embed_x_only(const Potential1D& U, int ny) {
  const double h = U.h();
  const double ly = h * ny;
  const Grid2D g = make_grid({U.x_min, U.periodic ? U.x_max : U.x_max, 0.0, ly},
                             {static_cast<int>(U.size()), ny}, {U.periodic, true});
  ComplexField f(g);
  for (int iy = 0; iy < ny; ++iy)
    for (std::size_t ix = 0; ix < U.size(); ++ix) f(static_cast<int>(ix), iy) = U.values[ix];
  return f;
}

std::vector<double> mkdv_rhs(const Potential1D& U) {
  const std::size_t n = U.size();
  const double h = U.h();
  const auto& u = U.values;
  std::vector<double> out(n, std::numeric_limits<double>::quiet_NaN());
  auto at = [&](std::ptrdiff_t i) { return u[static_cast<std::size_t>((i % static_cast<std::ptrdiff_t>(n) + n) % n)]; };
  for (std::size_t k = 0; k < n; ++k) {
    if (!U.periodic && (k < 2 || k + 2 >= n)) continue;
    const auto i = static_cast<std::ptrdiff_t>(k);
    const double ux = (at(i + 1) - at(i - 1)) / (2.0 * h);
    const double uxxx = (at(i + 2) - 2.0 * at(i + 1) + 2.0 * at(i - 1) - at(i - 2)) / (2.0 * h * h * h);
    out[k] = 0.25 * uxxx + 6.0 * ux * u[k] * u[k];
  }
  return out;
}

double mkdv_reduction_identity(const Potential1D& U, int margin) {
  const ComplexField f = embed_x_only(U);
  const ComplexField r = mnv_rhs(f, f * f);
  const std::vector<double> m = mkdv_rhs(U);
  const std::size_t n = U.size();
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (!U.periodic && (k < static_cast<std::size_t>(margin) || k + static_cast<std::size_t>(margin) >= n)) continue;
    worst = std::max(worst, std::abs(r(static_cast<int>(k), 0) - m[k]));
  }
  return worst;
}

WillmoreBound willmore_bound_check(const Potential1D& U, int N, double tol, double decay_tol) {
  if (U.size() < 2) throw ConfigError("willmore_bound_check: empty potential");
  const double umax = std::abs(*std::max_element(U.values.begin(), U.values.end(),
                                                 [](double a, double b) { return std::abs(a) < std::abs(b); }));
  if (!U.periodic) {
    const double tail = std::max(std::abs(U.values.front()), std::abs(U.values.back()));
    if (tail > decay_tol * std::max(umax, 1e-300) && umax > 0.0)
      throw DecayError("willmore_bound_check: potential does not decay at the ends");
  }
  std::vector<cplx> sq(U.size());
  for (std::size_t i = 0; i < U.size(); ++i) sq[i] = U.values[i] * U.values[i];
  if (!U.periodic) {
    sq.front() *= 0.5;
    sq.back() *= 0.5;
  }
  const double integral = pairwise_sum(sq).real() * U.h();
  WillmoreBound w;
  w.value = 4.0 * 2.0 * std::numbers::pi * integral;
  w.bound = 4.0 * std::numbers::pi * N * N;
  w.pass = w.value >= w.bound - tol * std::max(1.0, w.bound);
  w.equality = std::abs(w.value - w.bound) <= tol * std::max(1.0, w.bound);
  return w;
}

}  // namespace spinsurf
