#include "spinsurf/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "spinsurf/error.hpp"

namespace spinsurf {

bool Grid2D::on_boundary(int ix, int iy) const noexcept {
  const bool bx = !periodic_.x && (ix == 0 || ix == res_.nx - 1);
  const bool by = !periodic_.y && (iy == 0 || iy == res_.ny - 1);
  return bx || by;
}

NodeIndex Grid2D::nearest(cplx p) const noexcept {
  const int ix = static_cast<int>(std::lround((p.real() - bounds_.x_min) / hx_));
  const int iy = static_cast<int>(std::lround((p.imag() - bounds_.y_min) / hy_));
  return {std::clamp(ix, 0, res_.nx - 1), std::clamp(iy, 0, res_.ny - 1)};
}

bool operator==(const Grid2D& a, const Grid2D& b) noexcept {
  return a.res_.nx == b.res_.nx && a.res_.ny == b.res_.ny && a.periodic_.x == b.periodic_.x &&
         a.periodic_.y == b.periodic_.y && a.bounds_.x_min == b.bounds_.x_min && a.bounds_.x_max == b.bounds_.x_max &&
         a.bounds_.y_min == b.bounds_.y_min && a.bounds_.y_max == b.bounds_.y_max;
}

Grid2D make_grid(const Bounds& bounds, const Resolution& resolution, const Periodicity& periodicity) {
  const auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(bounds.x_min) || !finite(bounds.x_max) || !finite(bounds.y_min) || !finite(bounds.y_max) ||
      !(bounds.x_max > bounds.x_min) || !(bounds.y_max > bounds.y_min)) {
    std::ostringstream os;
    os << "degenerate grid bounds [" << bounds.x_min << ", " << bounds.x_max << "] x [" << bounds.y_min << ", "
       << bounds.y_max << "]";
    throw ConfigError(os.str());
  }
  if (resolution.nx < 4 || resolution.ny < 4) {
    std::ostringstream os;
    os << "grid resolution " << resolution.nx << "x" << resolution.ny << " below the minimum of 4 per axis";
    throw ConfigError(os.str());
  }
  Grid2D g;
  g.bounds_ = bounds;
  g.res_ = resolution;
  g.periodic_ = periodicity;
  g.hx_ = (bounds.x_max - bounds.x_min) / (periodicity.x ? resolution.nx : resolution.nx - 1);
  g.hy_ = (bounds.y_max - bounds.y_min) / (periodicity.y ? resolution.ny : resolution.ny - 1);
  return g;
}

Grid2D make_box(double half_width, int n, bool periodic) {
  return make_grid({-half_width, half_width, -half_width, half_width}, {n, n}, {periodic, periodic});
}

}  // namespace spinsurf
