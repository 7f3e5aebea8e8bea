#pragma once

#include <optional>

#include "spinsurf/moutard.hpp"
#include "spinsurf/rational.hpp"

namespace spinsurf {

/// 2×2 matrix of BiPolys.
struct PolyMat2 {
  BiPoly m11, m12, m21, m22;

  static PolyMat2 quaternion(const BiPoly& a, const BiPoly& b) { return {a, -b.conj(), b, a.conj()}; }
  static PolyMat2 gamma() { return {BiPoly(), BiPoly(1.0), BiPoly(-1.0), BiPoly()}; }

  BiPoly det() const { return m11 * m22 - m12 * m21; }
  PolyMat2 adjugate() const { return {m22, -m12, -m21, m11}; }
  PolyMat2 transpose() const { return {m11, m21, m12, m22}; }
  PolyMat2 adjoint() const { return {m11.conj(), m21.conj(), m12.conj(), m22.conj()}; }
  PolyMat2 derivative(Var v) const { return {m11.derivative(v), m12.derivative(v), m21.derivative(v), m22.derivative(v)}; }

  friend PolyMat2 operator+(const PolyMat2& a, const PolyMat2& b) {
    return {a.m11 + b.m11, a.m12 + b.m12, a.m21 + b.m21, a.m22 + b.m22};
  }
  friend PolyMat2 operator-(const PolyMat2& a, const PolyMat2& b) {
    return {a.m11 - b.m11, a.m12 - b.m12, a.m21 - b.m21, a.m22 - b.m22};
  }
  friend PolyMat2 operator*(const PolyMat2& a, const PolyMat2& b) {
    return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22, a.m21 * b.m11 + a.m22 * b.m21,
            a.m21 * b.m12 + a.m22 * b.m22};
  }
  friend PolyMat2 operator*(cplx s, const PolyMat2& a) { return {s * a.m11, s * a.m12, s * a.m21, s * a.m22}; }
  friend bool operator==(const PolyMat2&, const PolyMat2&) = default;
};

/// Symbolic Γω (dz and dz̄ parts) and Γω1 (dt part) for polynomial
/// quaternion fields Φ, Ψ.
struct PolyForm {
  PolyMat2 dz, dzbar, dt;
};
PolyForm symbolic_gamma_omega(const PolyMat2& Phi, const PolyMat2& Psi, TransposeMode mode = TransposeMode::transpose);

/// Entrywise potential of a closed PolyForm, zero at z = t = 0, plus a
/// constant. Throws NotClosedError if any entry is not exact.
PolyMat2 symbolic_S(const PolyForm& form, const PolyMat2& constant);

/// Moutard transformation of the trivial background U = V = 0 with
/// Ψ0 = (1, 0) and Φ0 = (1, -i conj(f')), for a heat polynomial f.
struct SymbolicMoutard {
  PolyMat2 Psi0, Phi0;
  PolyMat2 S;    ///< S(Φ0,Ψ0), time-augmented
  BiPoly det_S;  ///< det S
  RationalFn U;  ///< W read from K
  RationalFn a;
  RationalFn V;  ///< 2i a_z
};

/// `constant` defaults to diag(-f(0,0), -conj f(0,0)), which makes
/// S = [[-f, i z̄], [i z, -f̄]].
SymbolicMoutard symbolic_moutard_trivial(const BiPoly& f, std::optional<PolyMat2> constant = std::nullopt,
                                         TransposeMode mode = TransposeMode::transpose);

}  // namespace spinsurf
