#pragma once

#include "spinsurf/field.hpp"

namespace spinsurf {

enum class Direction { z, zbar };

/// central2: second-order central differences in the interior and
/// second-order one-sided differences at non-periodic edges (exact on
/// quadratics). spectral: Fourier differentiation, fully periodic grids only.
enum class Scheme { central2, spectral };

ComplexField partial_x(const ComplexField& f, Scheme scheme = Scheme::central2);
ComplexField partial_y(const ComplexField& f, Scheme scheme = Scheme::central2);

/// ∂f = (f_x - i f_y)/2 or ∂̄f = (f_x + i f_y)/2.
/// Throws SchemeError for the spectral scheme on a non-periodic grid.
/// With central2, nodes whose stencil touches a singular node are flagged.
ComplexField wirtinger_derivative(const ComplexField& f, Direction direction, Scheme scheme = Scheme::central2);

/// Second Wirtinger derivative. Spectral uses the exact symbol; central2
/// composes first derivatives.
ComplexField wirtinger_second(const ComplexField& f, Direction first, Direction second,
                              Scheme scheme = Scheme::central2);

}  // namespace spinsurf
