#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "spinsurf/derivative.hpp"
#include "spinsurf/rational.hpp"

namespace spinsurf {

/// Exact DSII solution built from a heat polynomial f:
///   U = i(z f' - f)/Δ,  a = -i(z̄ + f̄ f')/Δ,  V = 2i a_z,  Δ = |z|² + |f|².
struct ExactSolution {
  std::string name = "custom";
  BiPoly f;
  RationalFn U;
  RationalFn a;
  RationalFn V;

  /// Pointwise U, V at (z, t). c binds the parameter if f has one.
  cplx U_at(cplx z, double t, cplx c = {}) const;
  cplx V_at(cplx z, double t, cplx c = {}) const;
  /// Samplers with t and c bound once; much faster than U_at in loops.
  std::function<cplx(cplx)> U_sampler(double t, cplx c = {}) const;
  std::function<cplx(cplx)> V_sampler(double t, cplx c = {}) const;
  /// Δ = |z|² + |f|² at (z, t).
  double denominator_at(cplx z, double t, cplx c = {}) const;
};

/// Throws DomainError unless f is holomorphic and f_t = i f_zz exactly.
ExactSolution exact_solution(const BiPoly& f, std::string name = "custom");

/// f = z² + c and f = z⁴ + c heat-extended, with c symbolic.
BiPoly s1_datum();
BiPoly s2_datum();

/// "s1" or "s2" with symbolic c, or with c bound when given.
/// Throws DomainError for unknown names.
ExactSolution catalog(const std::string& name, std::optional<cplx> c = std::nullopt);

/// The closed form of V displayed for s1 (symbolic c).
RationalFn s1_displayed_V();

/// Ozawa initial datum on a grid in physical (X, Y) coordinates:
/// e^{-i b (X² - Y²)/(4a)} / (a (1 + ((X/a)² + (Y/a)²)/2)).
/// Throws DomainError unless a ≠ 0. Blow-up time -a/b is metadata only.
ComplexField ozawa_initial(const Grid2D& physical_grid, double a, double b);
inline double ozawa_blowup_time(double a, double b) { return -a / b; }

/// Which coupling the residual uses.
enum class DsiiNormalization {
  full_potential,  ///< U_t = i(U_zz + U_z̄z̄ + (V + V̄)U),  V_z̄ = 2(|U|²)_z
  half_potential,  ///< U_t = i(U_zz + U_z̄z̄ + 2(V + V̄)U), V_z̄ = (|U|²)_z
};

/// V for the half-potential coupling from V for the full one (V/2).
ComplexField to_half_potential(const ComplexField& V);
RationalFn to_half_potential(const RationalFn& V);

struct SymbolicResidual {
  BiPoly evolution;   ///< numerator of U_t - i(U_zz + U_z̄z̄ + k(V + V̄)U)
  BiPoly constraint;  ///< numerator of V_z̄ - m(|U|²)_z
  double scale = 1.0;
  bool exact = false;  ///< both numerators have Gaussian-integer coefficients
  bool zero() const;
};

/// Residual numerators of (U, V) in exact BiPoly arithmetic.
SymbolicResidual dsii_symbolic_residual(const RationalFn& U, const RationalFn& V,
                                        DsiiNormalization norm = DsiiNormalization::full_potential);

struct ResidualNorms {
  double max = 0.0;
  double l2 = 0.0;
};

/// Residual of the full-potential flow at the middle of three time slices
/// U(t-dt), U(t), U(t+dt), with V at the middle slice. Max over nodes
/// `margin` away from non-periodic edges.
ResidualNorms dsii_residual(const std::array<const ComplexField*, 3>& U, const ComplexField& V, double dt,
                            Scheme scheme = Scheme::central2, int margin = 2);

/// Solves V_z̄ = 2(|U|²)_z spectrally on a fully periodic grid; V has zero
/// mean. Throws SchemeError otherwise.
ComplexField v_from_u(const ComplexField& U);

/// Fields in the physical coordinates X = 2y, Y = 2x, T = 2t with
/// U_p = U/√2 and Δφ = ∂_X|U_p|². In these variables
/// iU_T - U_XX + U_YY = -4|U_p|²U_p + 8φ_X U_p. With the unscaled U and
/// φ̃ = 2φ (so Δφ̃ = ∂_X|U|²), Re V = 2|U|² - 4φ̃_X.
struct PhysicalForm {
  ComplexField U;
  ComplexField phi;
  double ozeq_residual = 0.0;  ///< max residual when time slices were given
  /// max |Re V - (2|U|² - 4φ̃_X)| over the grid, up to the constant mode
  /// that the periodic Poisson solves leave free
  double rev_mismatch = 0.0;
};

/// Maps a field on an (x, y) grid to the (X, Y) grid and back.
ComplexField to_physical(const ComplexField& f);
ComplexField from_physical(const ComplexField& f);

/// Slices U(t-dt), U(t), U(t+dt) on a fully periodic (x, y) grid. The
/// residual is taken over the central `window` fraction of the box.
PhysicalForm physical_form(const std::array<const ComplexField*, 3>& U, double dt, double window = 1.0);
/// Single slice: φ and the Re V relation only.
PhysicalForm physical_form(const ComplexField& U);

struct SingularEvent {
  double t_sing = 0.0;
  cplx location{};
  /// A in U ~ A e^{2iφ} as z = r e^{iφ} -> 0.
  cplx coefficient{};
};

/// Real t with f(0, t) = 0 (companion-matrix roots with |Im| ≤ 1e-10,
/// polished by Newton steps). The coefficient comes from the Taylor data
/// of f at z = 0. f must have no unbound parameter.
std::vector<SingularEvent> singular_times(const ExactSolution& sol);

/// A in U ~ A e^{2iφ}, measured: U e^{-2iφ} is averaged over angles on a
/// few small circles and extrapolated linearly to r = 0.
cplx radial_limit_fit(const ExactSolution& sol, double t, cplx c = {}, double r0 = 1e-3);

struct NormResult {
  double value = 0.0;      ///< tail-corrected
  double box_value = 0.0;  ///< quadrature on the base box
  double double_box_value = 0.0;
  double decay_ratio = 0.0;  ///< edge max of |U|² on 2L over edge max on L
  std::size_t masked = 0;
};

struct NormOptions {
  double half_width = 20.0;
  double h = 0.025;
  double decay_limit = 0.2;
};

/// ‖U‖² = ∫|U|² dx dy over the plane: trapezoid quadrature on the boxes
/// [-L, L]² and [-2L, 2L]² and Richardson tail extrapolation
/// (4 N(2L) - N(L))/3 for |U|² ~ r^-4. A non-finite sample is replaced by
/// the mean of |U|² on a tiny circle around it and counted in `masked`.
/// Throws DecayError if the decay_ratio exceeds the limit.
NormResult l2_norm_sq(const std::function<cplx(cplx)>& U, const NormOptions& opts = {});

/// Quadrature of |U|² on a sampled field with masked nodes skipped.
double l2_norm_sq(const ComplexField& U);

}  // namespace spinsurf
