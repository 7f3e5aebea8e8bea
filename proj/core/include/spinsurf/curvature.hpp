#pragma once

#include "spinsurf/surface.hpp"

namespace spinsurf {

struct CurvatureField {
  /// R³: signed mean curvature (sign follows x_x × x_y). R⁴: |H⃗|.
  /// Stored in the real part; boundary and degenerate nodes are flagged.
  ComplexField H;
  std::size_t flagged = 0;
};

/// Mean curvature from the first and second fundamental forms, with
/// second-order central differences in the grid parameters. Only interior
/// nodes (one node from non-periodic edges) are evaluated; nodes whose
/// metric is degenerate or whose stencil touches a singular node are
/// flagged.
CurvatureField discrete_mean_curvature(const SurfaceMap& s);

/// max over unflagged nodes of |H|·e^α, e^α = sqrt(det g) for conformal maps.
double max_scaled_curvature(const SurfaceMap& s, const CurvatureField& c);

}  // namespace spinsurf
