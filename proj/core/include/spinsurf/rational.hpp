#pragma once

#include "spinsurf/bipoly.hpp"

namespace spinsurf {

/// Quotient num / base^power of BiPolys.
///
/// Keeping the denominator as a power of one base lets the quotient rule
/// stay inside a single base, which is the common case for exact DSII
/// solutions (base |z|² + |f|²). Operands with different bases fall back to
/// a product denominator with power 1.
class RationalFn {
 public:
  RationalFn() : base_(1.0) {}
  RationalFn(BiPoly num);  // NOLINT(google-explicit-constructor)
  /// Throws DomainError if base is the zero polynomial.
  RationalFn(BiPoly num, BiPoly base, int power = 1);

  const BiPoly& num() const noexcept { return num_; }
  const BiPoly& base() const noexcept { return base_; }
  int power() const noexcept { return power_; }
  /// base^power
  BiPoly den() const { return base_.pow(power_); }

  RationalFn& operator+=(const RationalFn& o);
  RationalFn& operator-=(const RationalFn& o);
  RationalFn& operator*=(const RationalFn& o);
  RationalFn operator-() const { return {-num_, base_, power_}; }

  friend RationalFn operator+(RationalFn a, const RationalFn& b) { return a += b; }
  friend RationalFn operator-(RationalFn a, const RationalFn& b) { return a -= b; }
  friend RationalFn operator*(RationalFn a, const RationalFn& b) { return a *= b; }
  friend RationalFn operator*(RationalFn a, cplx s) { return {a.num_ * s, a.base_, a.power_}; }
  friend RationalFn operator*(cplx s, RationalFn a) { return {a.num_ * s, a.base_, a.power_}; }

  /// Formal conjugate of numerator and base.
  RationalFn conj() const { return {num_.conj(), base_.conj(), power_}; }

  /// Quotient rule: (N' B − k N B') / B^{k+1}.
  RationalFn derivative(Var v) const;

  RationalFn bind_parameter(cplx c) const { return {num_.bind_parameter(c), base_.bind_parameter(c), power_}; }

  /// Value at a point with z̄ = conj(z), c̄ = conj(c). The denominator may
  /// vanish, giving inf/nan.
  cplx eval(cplx z, double t, cplx c = {}) const;

  /// Numerator of a − b over a common denominator.
  friend BiPoly cross_difference(const RationalFn& a, const RationalFn& b);
  /// True when a − b is the zero function (cross-multiplication test).
  friend bool identical(const RationalFn& a, const RationalFn& b);

 private:
  void align_with(RationalFn& o);
  BiPoly num_;
  BiPoly base_;
  int power_ = 0;
};

}  // namespace spinsurf
