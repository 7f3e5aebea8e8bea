#pragma once

#include <span>
#include <vector>

#include "spinsurf/field.hpp"

namespace spinsurf {

/// How integrate2d treats singular-flagged nodes.
enum class MaskPolicy {
  reject,  ///< throw MaskError if any node is flagged
  skip,    ///< give flagged nodes zero weight
};

/// Tensor-product quadrature: trapezoid along non-periodic axes, rectangle
/// rule along periodic ones. Reductions use pairwise summation.
cplx integrate2d(const ComplexField& f, MaskPolicy policy = MaskPolicy::reject);

/// Line integral of p dz + q dz̄ along a node path, trapezoid per segment.
/// Consecutive nodes must be grid neighbours (wrapping across periodic axes
/// is allowed); throws PathError otherwise.
cplx path_integrate(const Form1& form, std::span<const NodeIndex> path);

enum class PathOrder {
  x_first,  ///< along the basepoint row, then along each column
  y_first,  ///< along the basepoint column, then along each row
};

/// Axis-aligned L-shaped node path from `from` to `to`.
std::vector<NodeIndex> l_path(NodeIndex from, NodeIndex to, PathOrder order);

/// Primitive F of the form with F(base) = 0, evaluated at every node by
/// cumulative trapezoid integration along L-paths. O(N) total.
/// Periodic axes are not wrapped: paths stay inside the fundamental cell.
ComplexField primitive(const Form1& form, NodeIndex base, PathOrder order = PathOrder::x_first);

/// Closed rectangular node loop with corners lo and hi (counter-clockwise).
std::vector<NodeIndex> rectangle_loop(NodeIndex lo, NodeIndex hi);

}  // namespace spinsurf
