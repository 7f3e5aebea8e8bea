#pragma once

#include "spinsurf/derivative.hpp"
#include "spinsurf/spinor.hpp"

namespace spinsurf {

/// Dψ for D = [[U, ∂], [-∂̄, Ū]]:
///   (Dψ)_1 = U ψ1 + ∂ψ2,  (Dψ)_2 = -∂̄ψ1 + Ū ψ2.
/// Throws GridMismatchError when U and ψ live on different grids.
SpinorField apply_D(const ComplexField& U, const SpinorField& psi, Scheme scheme = Scheme::central2);
SpinorField apply_D(const PotentialPair& pot, const SpinorField& psi, Scheme scheme = Scheme::central2);

/// D∨φ for D∨ = [[Ū, ∂], [-∂̄, U]].
SpinorField apply_Dvee(const ComplexField& U, const SpinorField& phi, Scheme scheme = Scheme::central2);
SpinorField apply_Dvee(const PotentialPair& pot, const SpinorField& phi, Scheme scheme = Scheme::central2);

/// Max modulus of both components over non-singular nodes at least `margin`
/// nodes from a non-periodic edge.
double residual_norm(const SpinorField& r, int margin = 0);

}  // namespace spinsurf
