#pragma once

#include <cmath>
#include <functional>

#include "spinsurf/field.hpp"
#include "spinsurf/grid.hpp"
#include "spinsurf/spinor.hpp"

namespace spinsurf::testing {

inline double rel_err(cplx a, cplx b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

/// Observed convergence order from errors at h and h/2.
inline double order(double coarse, double fine) { return std::log2(coarse / fine); }

inline SpinorField sample_pair(const Grid2D& g, const std::function<cplx(cplx)>& a,
                               const std::function<cplx(cplx)>& b) {
  return {ComplexField::sample(g, a), ComplexField::sample(g, b)};
}

/// max |f - exact| over nodes at least `margin` from non-periodic edges.
inline double max_error(const ComplexField& f, const std::function<cplx(cplx)>& exact, int margin = 0) {
  ComplexField e = f - ComplexField::sample(f.grid(), exact);
  e.merge_mask(f);
  return e.max_abs_interior(margin);
}

}  // namespace spinsurf::testing
