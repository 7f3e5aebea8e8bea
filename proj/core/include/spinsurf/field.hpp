#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "spinsurf/grid.hpp"

namespace spinsurf {

/// Complex values sampled on every node of a grid, with an optional
/// per-node "singular" flag. Flagged nodes may hold non-finite values.
class ComplexField {
 public:
  ComplexField() = default;
  explicit ComplexField(const Grid2D& grid, cplx fill = {});
  ComplexField(const Grid2D& grid, std::vector<cplx> values);

  /// Samples fn(z) at every node.
  static ComplexField sample(const Grid2D& grid, const std::function<cplx(cplx)>& fn);

  const Grid2D& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }

  cplx& operator[](std::size_t i) noexcept { return values_[i]; }
  const cplx& operator[](std::size_t i) const noexcept { return values_[i]; }
  cplx& operator()(int ix, int iy) noexcept { return values_[grid_.index(ix, iy)]; }
  const cplx& operator()(int ix, int iy) const noexcept { return values_[grid_.index(ix, iy)]; }

  std::span<cplx> values() noexcept { return values_; }
  std::span<const cplx> values() const noexcept { return values_; }

  void flag_singular(std::size_t i);
  bool is_singular(std::size_t i) const noexcept { return !mask_.empty() && mask_[i] != 0; }
  bool has_singular() const noexcept;
  std::size_t singular_count() const noexcept;
  const std::vector<std::uint8_t>& mask() const noexcept { return mask_; }
  /// Adopts the singular flags of another field on the same grid (union).
  void merge_mask(const ComplexField& other);

  /// Max |value| over non-singular nodes.
  double max_abs() const noexcept;
  /// Max |value| over non-singular interior nodes at least `margin` away from
  /// a non-periodic edge.
  double max_abs_interior(int margin) const noexcept;
  /// True when every non-singular value is finite.
  bool all_finite() const noexcept;

  ComplexField conj() const;
  ComplexField abs2() const;
  ComplexField real_part() const;

  ComplexField& operator+=(const ComplexField& o);
  ComplexField& operator-=(const ComplexField& o);
  ComplexField& operator*=(const ComplexField& o);
  ComplexField& operator*=(cplx s) noexcept;

  friend ComplexField operator+(ComplexField a, const ComplexField& b) { return a += b; }
  friend ComplexField operator-(ComplexField a, const ComplexField& b) { return a -= b; }
  friend ComplexField operator*(ComplexField a, const ComplexField& b) { return a *= b; }
  friend ComplexField operator*(ComplexField a, cplx s) { return a *= s; }
  friend ComplexField operator*(cplx s, ComplexField a) { return a *= s; }

 private:
  Grid2D grid_{};
  std::vector<cplx> values_;
  std::vector<std::uint8_t> mask_;
};

/// Throws GridMismatchError unless both fields share a grid.
void require_same_grid(const ComplexField& a, const ComplexField& b, const char* where);

/// Applies fn to each value pair. Output inherits both masks.
ComplexField zip(const ComplexField& a, const ComplexField& b, const std::function<cplx(cplx, cplx)>& fn);
ComplexField map(const ComplexField& a, const std::function<cplx(cplx)>& fn);

/// The 1-form p dz + q dz̄.
struct Form1 {
  ComplexField p;
  ComplexField q;
};

}  // namespace spinsurf
