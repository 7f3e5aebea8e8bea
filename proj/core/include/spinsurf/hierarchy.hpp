#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "spinsurf/derivative.hpp"
#include "spinsurf/field.hpp"

namespace spinsurf {

enum class PotentialKind { soliton, clifford, custom };

/// Real potential U(x) sampled on a uniform 1-D grid, extended constantly
/// in y over [0, 2π].
struct Potential1D {
  PotentialKind kind = PotentialKind::custom;
  int n = 0;  ///< soliton index N
  double x_min = 0.0;
  double x_max = 0.0;
  bool periodic = false;  ///< samples exclude x_max when set
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  double h() const;
  double x(std::size_t i) const;
  std::string name() const;

  /// U_N(x) = N/(2 cosh x) on [-half_width, half_width].
  static Potential1D soliton(int N, double half_width = 25.0, std::size_t samples = 4001);
  /// U(x) = sin x/(2√2(sin x - √2)) on the period [0, 2π).
  static Potential1D clifford(std::size_t samples = 512);
  static Potential1D custom(std::function<double(double)> u, double x_min, double x_max, std::size_t samples,
                            bool periodic = false);
};

Potential1D potential_from_name(const std::string& name, int N, std::size_t samples);

/// U_zzz + 3U_z V + (3/2) U V_z + U_z̄z̄z̄ + 3U_z̄ V̄ + (3/2) U V̄_z̄
ComplexField mnv_rhs(const ComplexField& U, const ComplexField& V, Scheme scheme = Scheme::central2);
/// U_zzz + U_z̄z̄z̄ + (VU)_z + (V̄U)_z̄
ComplexField nv_rhs(const ComplexField& U, const ComplexField& V, Scheme scheme = Scheme::central2);

struct FlowResidual {
  double evolution = 0.0;  ///< max |U_t - RHS| at the middle slice
  double constraint = 0.0; ///< max |V_z̄ - constraint source|
};

/// Residuals of the mNV system with V_z̄ = (U²)_z, from three U slices spaced
/// dt apart and V at the middle slice.
FlowResidual mnv_residual(const std::array<const ComplexField*, 3>& U, const ComplexField& V, double dt,
                          Scheme scheme = Scheme::central2, int margin = 4);
/// Same for the NV system with V_z̄ = 3U_z.
FlowResidual nv_residual(const std::array<const ComplexField*, 3>& U, const ComplexField& V, double dt,
                         Scheme scheme = Scheme::central2, int margin = 4);

/// Embeds x-only samples in a 2-D grid periodic in y.
ComplexField embed_x_only(const Potential1D& U, int ny = 4);

/// ¼U_xxx + 6U_x U² from 1-D central stencils (NaN within two nodes of a
/// non-periodic end).
std::vector<double> mkdv_rhs(const Potential1D& U);

/// max |mnv_rhs(U, U²) - mkdv_rhs(U)| over nodes at least `margin` from a
/// non-periodic end.
double mkdv_reduction_identity(const Potential1D& U, int margin = 4);

struct WillmoreBound {
  double value = 0.0;  ///< 4∫U² dx dy over the strip
  double bound = 0.0;  ///< 4πN²
  bool pass = false;   ///< value ≥ bound - tol
  bool equality = false;
};

/// Throws DecayError when a non-periodic potential does not decay to
/// `decay_tol`·max|U| at the ends.
WillmoreBound willmore_bound_check(const Potential1D& U, int N, double tol = 1e-6, double decay_tol = 1e-8);

}  // namespace spinsurf
