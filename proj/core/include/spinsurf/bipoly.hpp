#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>

#include "spinsurf/grid.hpp"

namespace spinsurf {

/// Formal variables of a BiPoly. z and z̄ are independent symbols, as are
/// the solution parameter c and its conjugate; t is real.
enum class Var { z, zbar, t, c, cbar };

using Exponents = std::array<int, 5>;

/// Polynomial in (z, z̄, t, c, c̄) with complex coefficients.
///
/// Exponents are packed into 12 bits per variable. Zero coefficients are
/// never stored. Coefficients stay exact while they are Gaussian integers
/// below 2^53, which covers all integer heat data.
class BiPoly {
 public:
  static constexpr int kMaxDegree = 4095;

  BiPoly() = default;
  BiPoly(cplx constant);  // NOLINT(google-explicit-constructor)

  static BiPoly var(Var v, int power = 1);
  static BiPoly monomial(cplx coeff, const Exponents& e);
  static BiPoly monomial(cplx coeff, int dz, int dzbar = 0, int dt = 0, int dc = 0, int dcbar = 0);

  const std::map<std::uint64_t, cplx>& terms() const noexcept { return terms_; }
  std::size_t term_count() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }

  static std::uint64_t pack(const Exponents& e);
  static Exponents unpack(std::uint64_t key) noexcept;

  cplx coefficient(const Exponents& e) const;
  int degree(Var v) const noexcept;
  bool depends_on(Var v) const noexcept { return degree(v) > 0; }
  bool has_parameters() const noexcept { return depends_on(Var::c) || depends_on(Var::cbar); }
  double max_abs_coefficient() const noexcept;
  /// True when every coefficient is a Gaussian integer below 2^53.
  bool integral() const noexcept;

  BiPoly& operator+=(const BiPoly& o);
  BiPoly& operator-=(const BiPoly& o);
  BiPoly& operator*=(const BiPoly& o);
  BiPoly& operator*=(cplx s);
  BiPoly operator-() const;

  friend BiPoly operator+(BiPoly a, const BiPoly& b) { return a += b; }
  friend BiPoly operator-(BiPoly a, const BiPoly& b) { return a -= b; }
  friend BiPoly operator*(const BiPoly& a, const BiPoly& b);
  friend BiPoly operator*(BiPoly a, cplx s) { return a *= s; }
  friend BiPoly operator*(cplx s, BiPoly a) { return a *= s; }
  friend bool operator==(const BiPoly& a, const BiPoly& b) { return a.terms_ == b.terms_; }

  BiPoly pow(int n) const;

  /// Formal conjugate: conjugates coefficients and swaps z<->z̄, c<->c̄.
  BiPoly conj() const;

  /// Formal partial derivative in one variable.
  BiPoly derivative(Var v) const;

  /// Replaces one variable by a value.
  BiPoly bind(Var v, cplx value) const;
  /// Replaces c by a value and c̄ by its conjugate.
  BiPoly bind_parameter(cplx c) const;

  /// Value at a point with z̄ = conj(z) and c̄ = conj(c).
  cplx eval(cplx z, double t, cplx c = {}) const;
  /// Value with every variable independent.
  cplx eval_independent(const std::array<cplx, 5>& values) const;

  /// Exact zero test for integral polynomials; otherwise every coefficient
  /// must be within rel_tol * scale of zero.
  bool is_identically_zero(double scale, double rel_tol = 1e-12) const noexcept;

  /// Human-readable form such as "(0+2i)*t + z^2".
  std::string to_string() const;

 private:
  void add_term(std::uint64_t key, cplx c);
  std::map<std::uint64_t, cplx> terms_;
};

/// Solution of f_t = i f_zz with f(z, 0) = initial, obtained from
/// f = Σ_n (it)^n/n! ∂^{2n} initial. The series terminates for polynomials.
/// Throws DomainError if the initial datum depends on z̄ or t.
BiPoly heat_extend(const BiPoly& initial);

/// Residual f_t − i f_zz, zero for heat polynomials.
BiPoly heat_residual(const BiPoly& f);

/// Potential F with F_z = p, F_z̄ = q, F_t = r and F = 0 at z = t = 0
/// (parameters c, c̄ untouched). Throws NotClosedError when the triple is not
/// the differential of a polynomial.
BiPoly poly_potential(const BiPoly& p, const BiPoly& q, const BiPoly& r = {});

}  // namespace spinsurf
