#include "spinsurf/moutard_symbolic.hpp"

#include "spinsurf/error.hpp"

namespace spinsurf {
namespace {

constexpr cplx kI{0.0, 1.0};

PolyMat2 tr(const PolyMat2& m, TransposeMode mode) {
  return mode == TransposeMode::transpose ? m.transpose() : m.adjoint();
}

const PolyMat2 kP1{BiPoly(1.0), BiPoly(), BiPoly(), BiPoly()};
const PolyMat2 kP2{BiPoly(), BiPoly(), BiPoly(), BiPoly(1.0)};

}  // namespace

PolyForm symbolic_gamma_omega(const PolyMat2& Phi, const PolyMat2& Psi, TransposeMode mode) {
  const PolyMat2 G = PolyMat2::gamma();
  const PolyMat2 Ft = tr(Phi, mode);
  PolyForm w;
  w.dz = G * (cplx(0.0, -1.0) * (Ft * kP1 * Psi));
  w.dzbar = G * (kI * (Ft * kP2 * Psi));
  const PolyMat2 left = tr(Phi.derivative(Var::z), mode) * kP1 + tr(Phi.derivative(Var::zbar), mode) * kP2;
  w.dt = G * (left * Psi - Ft * (kP1 * Psi.derivative(Var::z) + kP2 * Psi.derivative(Var::zbar)));
  return w;
}

PolyMat2 symbolic_S(const PolyForm& w, const PolyMat2& constant) {
  return PolyMat2{poly_potential(w.dz.m11, w.dzbar.m11, w.dt.m11), poly_potential(w.dz.m12, w.dzbar.m12, w.dt.m12),
                  poly_potential(w.dz.m21, w.dzbar.m21, w.dt.m21), poly_potential(w.dz.m22, w.dzbar.m22, w.dt.m22)} +
         constant;
}

SymbolicMoutard symbolic_moutard_trivial(const BiPoly& f, std::optional<PolyMat2> constant, TransposeMode mode) {
  const double scale = std::max(1.0, f.max_abs_coefficient());
  if (!heat_residual(f).is_identically_zero(scale)) throw DomainError("symbolic_moutard_trivial: f is not a heat polynomial");
  if (f.depends_on(Var::zbar)) throw DomainError("symbolic_moutard_trivial: f must be holomorphic");
  SymbolicMoutard m;
  const BiPoly fp = f.derivative(Var::z);
  m.Psi0 = PolyMat2::quaternion(BiPoly(1.0), BiPoly());
  m.Phi0 = PolyMat2::quaternion(BiPoly(1.0), cplx(0.0, -1.0) * fp.conj());
  if (!constant) {
    const BiPoly f00 = f.bind(Var::z, 0.0).bind(Var::t, 0.0);
    constant = PolyMat2{-f00, BiPoly(), BiPoly(), -f00.conj()};
  }
  m.S = symbolic_S(symbolic_gamma_omega(m.Phi0, m.Psi0, mode), *constant);
  m.det_S = m.S.det();
  const PolyMat2 G = PolyMat2::gamma();
  const PolyMat2 Ginv = cplx(-1.0) * G;
  const PolyMat2 Knum = m.Psi0 * m.S.adjugate() * G * tr(m.Phi0, mode) * Ginv;
  // K = Knum / det, W = i conj(K11), a = K12.
  m.U = RationalFn(kI * Knum.m11.conj(), m.det_S.conj());
  m.a = RationalFn(Knum.m12, m.det_S);
  m.V = kI * 2.0 * m.a.derivative(Var::z);
  return m;
}

}  // namespace spinsurf
