#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "spinsurf/derivative.hpp"
#include "spinsurf/quadrature.hpp"
#include "spinsurf/spinor.hpp"

namespace spinsurf {

using Point4 = std::array<double, 4>;

/// R³- or R⁴-valued map over a grid. Coordinates beyond `dim` are unused.
struct SurfaceMap {
  int dim = 3;
  Grid2D grid;
  std::array<std::vector<double>, 4> coords;
  Point4 basepoint{};
  NodeIndex base_node{};
  std::vector<std::uint8_t> mask;
  /// Largest disagreement between the x-first and y-first L-path primitives.
  double loop_defect = 0.0;

  SurfaceMap() = default;
  SurfaceMap(int dim_, const Grid2D& g);

  Point4 point(std::size_t i) const;
  void set_point(std::size_t i, const Point4& p);
  bool is_singular(std::size_t i) const noexcept { return !mask.empty() && mask[i] != 0; }
  void flag_singular(std::size_t i);
  std::size_t singular_count() const noexcept;
  /// Largest distance between two non-singular nodes' bounding-box corners.
  double diameter() const;
  /// Coordinate k as a complex field (zero imaginary part), carrying the mask.
  ComplexField coordinate_field(int k) const;
};

struct IntegrationOptions {
  /// Node whose image is `basepoint`; defaults to the node nearest z = 0.
  std::optional<NodeIndex> base_node;
  Point4 basepoint{};
  /// Max loop defect relative to max(1, diameter) before NotClosedError.
  double loop_tol = 1e-2;
};

/// The three 1-form coefficients x^k_z of the R³ representation.
std::array<ComplexField, 3> r3_differentials(const SpinorField& psi);
/// The four coefficients x^k_z of the R⁴ representation.
std::array<ComplexField, 4> r4_differentials(const SpinorField& psi, const SpinorField& phi);

/// Integrates x^k = ∫ (x^k_z dz + conj(x^k_z) dz̄) along L-paths from the base
/// node. Throws NotClosedError when the two path orders disagree by more
/// than the tolerance.
SurfaceMap integrate_surface_r3(const SpinorField& psi, const IntegrationOptions& opts = {});
SurfaceMap integrate_surface_r4(const SpinorField& psi, const SpinorField& phi, const IntegrationOptions& opts = {});

/// Integrates arbitrary coordinate differentials (3 or 4 of them).
SurfaceMap integrate_differentials(const std::vector<ComplexField>& xz, const IntegrationOptions& opts = {});

/// ∂x^k of the sampled coordinates.
std::vector<ComplexField> coordinate_derivatives(const SurfaceMap& s, Scheme scheme = Scheme::central2);

/// e^{2α} = 2 Σ|x^k_z|² from the sampled coordinates (imaginary part 0).
ComplexField induced_metric(const SurfaceMap& s, Scheme scheme = Scheme::central2);
/// (|ψ1|² + |ψ2|²)², the R³ spinor formula for e^{2α}.
ComplexField spinor_metric_r3(const SpinorField& psi);
/// (|ψ1|² + |ψ2|²)(|φ1|² + |φ2|²), the R⁴ spinor formula for e^{2α}.
ComplexField spinor_metric_r4(const SpinorField& psi, const SpinorField& phi);

/// max |Σ(x^k_z)²| / Σ|x^k_z|² over non-singular nodes `margin` away from
/// non-periodic edges.
double conformality_residual(const SurfaceMap& s, int margin = 2, Scheme scheme = Scheme::central2);

struct WillmoreResult {
  double value = 0.0;
  /// Max of |U|² on non-periodic edges divided by its global max.
  double boundary_ratio = 0.0;
  bool truncated = false;
  /// Rough bound on the missing mass assuming |U|² ~ r^-4 outside the box.
  double tail_estimate = 0.0;
};

/// 4 ∫|U|² dx dy. `decay_tol` is the boundary_ratio above which the result
/// is marked truncated.
WillmoreResult willmore(const ComplexField& U, double decay_tol = 1e-6);

struct GaussMap {
  int dim = 3;
  /// Normalized representative of (x^1_z : ... : x^n_z).
  std::array<ComplexField, 4> point;
  /// max |Σ(x^k_z)²| / Σ|x^k_z|² over non-degenerate nodes.
  double quadric_residual = 0.0;
  std::size_t degenerate = 0;
};

GaussMap gauss_map(const SurfaceMap& s, Scheme scheme = Scheme::central2);
/// Gauss map straight from differentials, without sampling coordinates.
GaussMap gauss_map(const std::vector<ComplexField>& xz);

/// Inverse of the R³ quadric parameterization
/// (a:b) -> ((i/2)(a² + b²) : (b² - a²)/2 : ab). Returns a unit-norm (a, b).
std::array<cplx, 2> quadric_preimage(const std::array<cplx, 3>& point);

/// Point of R⁴ as the quaternion [[ix³+x⁴, -x¹-ix²], [x¹-ix², -ix³+x⁴]].
Mat2 point_to_quaternion(const Point4& x);
Point4 quaternion_to_point(const Mat2& q);

/// Pointwise quaternionic inverse: inversion in the unit sphere composed
/// with (x1,x2,x3,x4) -> (-x1,-x2,-x3,x4). Nodes within 1e-9·diameter of
/// the origin are flagged singular. R³ input is embedded with x⁴ = 0.
SurfaceMap invert_surface(const SurfaceMap& s);

}  // namespace spinsurf
