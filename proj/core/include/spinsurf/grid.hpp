#pragma once

#include <complex>
#include <cstddef>

namespace spinsurf {

using cplx = std::complex<double>;

struct Bounds {
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.0;
  double y_max = 1.0;
};

struct Resolution {
  int nx = 4;
  int ny = 4;
};

struct Periodicity {
  bool x = false;
  bool y = false;
};

/// A node of a Grid2D addressed by its integer coordinates.
struct NodeIndex {
  int ix = 0;
  int iy = 0;
  friend bool operator==(const NodeIndex&, const NodeIndex&) = default;
};

/// Uniform rectangular sampling of a domain in the z = x + iy plane.
///
/// Non-periodic axes include both endpoints (h = L/(n-1)); periodic axes
/// drop the right endpoint (h = L/n), which is identified with the left one.
/// Node (ix, iy) is stored at linear index iy*nx + ix.
class Grid2D {
 public:
  Grid2D() = default;

  int nx() const noexcept { return res_.nx; }
  int ny() const noexcept { return res_.ny; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(res_.nx) * static_cast<std::size_t>(res_.ny); }

  const Bounds& bounds() const noexcept { return bounds_; }
  const Periodicity& periodicity() const noexcept { return periodic_; }
  bool periodic_x() const noexcept { return periodic_.x; }
  bool periodic_y() const noexcept { return periodic_.y; }
  bool fully_periodic() const noexcept { return periodic_.x && periodic_.y; }

  double hx() const noexcept { return hx_; }
  double hy() const noexcept { return hy_; }
  double length_x() const noexcept { return bounds_.x_max - bounds_.x_min; }
  double length_y() const noexcept { return bounds_.y_max - bounds_.y_min; }

  double x(int ix) const noexcept { return bounds_.x_min + ix * hx_; }
  double y(int iy) const noexcept { return bounds_.y_min + iy * hy_; }
  cplx z(int ix, int iy) const noexcept { return {x(ix), y(iy)}; }
  cplx z(std::size_t i) const noexcept { return z(ix_of(i), iy_of(i)); }

  std::size_t index(int ix, int iy) const noexcept {
    return static_cast<std::size_t>(iy) * static_cast<std::size_t>(res_.nx) + static_cast<std::size_t>(ix);
  }
  std::size_t index(NodeIndex n) const noexcept { return index(n.ix, n.iy); }
  int ix_of(std::size_t i) const noexcept { return static_cast<int>(i % static_cast<std::size_t>(res_.nx)); }
  int iy_of(std::size_t i) const noexcept { return static_cast<int>(i / static_cast<std::size_t>(res_.nx)); }
  NodeIndex node(std::size_t i) const noexcept { return {ix_of(i), iy_of(i)}; }
  bool contains(NodeIndex n) const noexcept { return n.ix >= 0 && n.ix < res_.nx && n.iy >= 0 && n.iy < res_.ny; }
  bool on_boundary(int ix, int iy) const noexcept;

  /// Node nearest to a point (clamped to the grid).
  NodeIndex nearest(cplx p) const noexcept;

  friend bool operator==(const Grid2D& a, const Grid2D& b) noexcept;

 private:
  friend Grid2D make_grid(const Bounds&, const Resolution&, const Periodicity&);
  Bounds bounds_{};
  Resolution res_{};
  Periodicity periodic_{};
  double hx_ = 0.0;
  double hy_ = 0.0;
};

/// Validates and builds a grid. Throws ConfigError for degenerate bounds or
/// fewer than 4 nodes per axis.
Grid2D make_grid(const Bounds& bounds, const Resolution& resolution, const Periodicity& periodicity = {});

/// Square box [-half_width, half_width]^2 with n nodes per axis.
Grid2D make_box(double half_width, int n, bool periodic);

}  // namespace spinsurf
