#pragma once

#include <array>
#include <filesystem>
#include <optional>

#include "spinsurf/field.hpp"

namespace spinsurf {

/// Complex 2×2 matrix, row-major.
struct Mat2 {
  cplx m11{}, m12{}, m21{}, m22{};

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  /// [[0, 1], [-1, 0]]
  static Mat2 gamma() { return {0.0, 1.0, -1.0, 0.0}; }
  /// The quaternion [[a, -conj(b)], [b, conj(a)]].
  static Mat2 quaternion(cplx a, cplx b) { return {a, -std::conj(b), b, std::conj(a)}; }

  cplx det() const { return m11 * m22 - m12 * m21; }
  Mat2 transpose() const { return {m11, m21, m12, m22}; }
  Mat2 adjoint() const { return {std::conj(m11), std::conj(m21), std::conj(m12), std::conj(m22)}; }
  /// Throws DomainError when det == 0.
  Mat2 inverse() const;
  double max_abs() const;
  /// Distance from quaternion form: max(|m22 - conj m11|, |m12 + conj m21|).
  double quaternion_defect() const;

  Mat2& operator+=(const Mat2& o);
  Mat2& operator-=(const Mat2& o);
  Mat2& operator*=(cplx s);
  friend Mat2 operator+(Mat2 a, const Mat2& b) { return a += b; }
  friend Mat2 operator-(Mat2 a, const Mat2& b) { return a -= b; }
  friend Mat2 operator*(Mat2 a, cplx s) { return a *= s; }
  friend Mat2 operator*(cplx s, Mat2 a) { return a *= s; }
  friend Mat2 operator*(const Mat2& a, const Mat2& b);
  friend bool operator==(const Mat2&, const Mat2&) = default;
};

/// Spinor ψ = (ψ1, ψ2) sampled on a grid.
struct SpinorField {
  ComplexField psi1;
  ComplexField psi2;

  SpinorField() = default;
  SpinorField(ComplexField a, ComplexField b);
  const Grid2D& grid() const noexcept { return psi1.grid(); }
};

/// Quaternion-valued field [[a, -b̄], [b, ā]], stored by its first column.
struct QuatField {
  ComplexField a;
  ComplexField b;

  QuatField() = default;
  QuatField(ComplexField a_, ComplexField b_);
  const Grid2D& grid() const noexcept { return a.grid(); }
  Mat2 at(std::size_t i) const { return Mat2::quaternion(a[i], b[i]); }
};

/// General 2×2 matrix-valued field.
struct MatrixField {
  std::array<ComplexField, 4> e;  ///< m11, m12, m21, m22

  MatrixField() = default;
  explicit MatrixField(const Grid2D& g);
  explicit MatrixField(const QuatField& q);
  const Grid2D& grid() const noexcept { return e[0].grid(); }
  Mat2 at(std::size_t i) const { return {e[0][i], e[1][i], e[2][i], e[3][i]}; }
  void set(std::size_t i, const Mat2& m);
  bool is_singular(std::size_t i) const noexcept;
  void flag_singular(std::size_t i);
  /// Max quaternion_defect over non-singular nodes.
  double quaternion_defect() const;
};

/// Matrix-valued 1-form P dz + Q dz̄.
struct MatrixForm {
  MatrixField p;
  MatrixField q;
};

/// Dirac potential U and, for DSII/mNV states, the auxiliary field V.
struct PotentialPair {
  ComplexField U;
  std::optional<ComplexField> V;
  bool real_mode = false;  ///< R³ mode: U must be real

  /// Throws DomainError if real_mode and max|Im U| > tol·max(1, max|U|),
  /// GridMismatchError if V lives elsewhere.
  void validate(double tol = 1e-10) const;
};

/// σψ = (-ψ̄2, ψ̄1).
SpinorField sigma(const SpinorField& psi);

/// Ψ = [[ψ1, -ψ̄2], [ψ2, ψ̄1]].
QuatField quaternionize(const SpinorField& psi);
SpinorField first_column(const QuatField& q);

/// Pointwise quaternion product; the result is again a quaternion field.
QuatField operator*(const QuatField& x, const QuatField& y);

struct GaugeResult {
  SpinorField psi;
  SpinorField phi;
  ComplexField U;
};

/// ψ1→e^h ψ1, ψ2→e^h̄ ψ2, φ1→e^{-h} φ1, φ2→e^{-h̄} φ2, U→e^{h̄-h} U.
/// Rejects h with max|∂̄h| > 1e-6·max|h| (central differences) by throwing
/// NotHolomorphicError.
GaugeResult gauge_transform(const SpinorField& psi, const SpinorField& phi, const ComplexField& U,
                            const ComplexField& h);

/// CSV with columns ix, iy, re1, im1, re2, im2.
void write_spinor_csv(const std::filesystem::path& path, const SpinorField& psi);
SpinorField read_spinor_csv(const std::filesystem::path& path);

}  // namespace spinsurf
