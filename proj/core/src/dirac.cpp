#include "spinsurf/dirac.hpp"

#include <algorithm>

#include "spinsurf/parallel.hpp"

namespace spinsurf {
namespace {

SpinorField apply_general(const ComplexField& diag1, const ComplexField& diag2, const SpinorField& psi,
                          Scheme scheme) {
  require_same_grid(diag1, psi.psi1, "Dirac operator");
  require_same_grid(psi.psi1, psi.psi2, "Dirac operator");
  ComplexField r1 = wirtinger_derivative(psi.psi2, Direction::z, scheme);
  ComplexField r2 = wirtinger_derivative(psi.psi1, Direction::zbar, scheme);
  parallel_for(r1.size(), [&](std::size_t i) {
    r1[i] += diag1[i] * psi.psi1[i];
    r2[i] = -r2[i] + diag2[i] * psi.psi2[i];
  });
  for (const ComplexField* f : {&diag1, &psi.psi1, &psi.psi2}) {
    r1.merge_mask(*f);
    r2.merge_mask(*f);
  }
  return {std::move(r1), std::move(r2)};
}

}  // namespace

SpinorField apply_D(const ComplexField& U, const SpinorField& psi, Scheme scheme) {
  return apply_general(U, U.conj(), psi, scheme);
}

SpinorField apply_D(const PotentialPair& pot, const SpinorField& psi, Scheme scheme) {
  pot.validate();
  return apply_D(pot.U, psi, scheme);
}

SpinorField apply_Dvee(const ComplexField& U, const SpinorField& phi, Scheme scheme) {
  return apply_general(U.conj(), U, phi, scheme);
}

SpinorField apply_Dvee(const PotentialPair& pot, const SpinorField& phi, Scheme scheme) {
  pot.validate();
  return apply_Dvee(pot.U, phi, scheme);
}

double residual_norm(const SpinorField& r, int margin) {
  return std::max(r.psi1.max_abs_interior(margin), r.psi2.max_abs_interior(margin));
}

}  // namespace spinsurf
