#include "spinsurf/field.hpp"

#include <algorithm>
#include <cmath>

#include "spinsurf/error.hpp"
#include "spinsurf/parallel.hpp"

namespace spinsurf {

ComplexField::ComplexField(const Grid2D& grid, cplx fill) : grid_(grid), values_(grid.size(), fill) {}

ComplexField::ComplexField(const Grid2D& grid, std::vector<cplx> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw GridMismatchError("value count does not match grid size");
}

ComplexField ComplexField::sample(const Grid2D& grid, const std::function<cplx(cplx)>& fn) {
  ComplexField f(grid);
  parallel_for(grid.size(), [&](std::size_t i) { f.values_[i] = fn(grid.z(i)); });
  return f;
}

void ComplexField::flag_singular(std::size_t i) {
  if (mask_.empty()) mask_.assign(values_.size(), 0);
  mask_[i] = 1;
}

bool ComplexField::has_singular() const noexcept {
  return std::any_of(mask_.begin(), mask_.end(), [](std::uint8_t m) { return m != 0; });
}

std::size_t ComplexField::singular_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(mask_.begin(), mask_.end(), [](std::uint8_t m) { return m != 0; }));
}

void ComplexField::merge_mask(const ComplexField& other) {
  if (other.mask_.empty()) return;
  if (mask_.empty()) {
    mask_ = other.mask_;
    return;
  }
  for (std::size_t i = 0; i < mask_.size(); ++i) mask_[i] |= other.mask_[i];
}

double ComplexField::max_abs() const noexcept {
  double m = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (!is_singular(i)) m = std::max(m, std::abs(values_[i]));
  return m;
}

double ComplexField::max_abs_interior(int margin) const noexcept {
  double m = 0.0;
  for (int iy = 0; iy < grid_.ny(); ++iy) {
    if (!grid_.periodic_y() && (iy < margin || iy >= grid_.ny() - margin)) continue;
    for (int ix = 0; ix < grid_.nx(); ++ix) {
      if (!grid_.periodic_x() && (ix < margin || ix >= grid_.nx() - margin)) continue;
      const std::size_t i = grid_.index(ix, iy);
      if (!is_singular(i)) m = std::max(m, std::abs(values_[i]));
    }
  }
  return m;
}

bool ComplexField::all_finite() const noexcept {
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (!is_singular(i) && !(std::isfinite(values_[i].real()) && std::isfinite(values_[i].imag()))) return false;
  return true;
}

ComplexField ComplexField::conj() const {
  return map(*this, [](cplx v) { return std::conj(v); });
}

ComplexField ComplexField::abs2() const {
  return map(*this, [](cplx v) { return cplx(std::norm(v), 0.0); });
}

ComplexField ComplexField::real_part() const {
  return map(*this, [](cplx v) { return cplx(v.real(), 0.0); });
}

ComplexField& ComplexField::operator+=(const ComplexField& o) {
  require_same_grid(*this, o, "ComplexField::operator+=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  merge_mask(o);
  return *this;
}

ComplexField& ComplexField::operator-=(const ComplexField& o) {
  require_same_grid(*this, o, "ComplexField::operator-=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  merge_mask(o);
  return *this;
}

ComplexField& ComplexField::operator*=(const ComplexField& o) {
  require_same_grid(*this, o, "ComplexField::operator*=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] *= o.values_[i];
  merge_mask(o);
  return *this;
}

ComplexField& ComplexField::operator*=(cplx s) noexcept {
  for (auto& v : values_) v *= s;
  return *this;
}

void require_same_grid(const ComplexField& a, const ComplexField& b, const char* where) {
  if (!(a.grid() == b.grid())) throw GridMismatchError(std::string(where) + ": fields live on different grids");
}

ComplexField zip(const ComplexField& a, const ComplexField& b, const std::function<cplx(cplx, cplx)>& fn) {
  require_same_grid(a, b, "zip");
  ComplexField out(a.grid());
  parallel_for(a.size(), [&](std::size_t i) { out[i] = fn(a[i], b[i]); });
  out.merge_mask(a);
  out.merge_mask(b);
  return out;
}

ComplexField map(const ComplexField& a, const std::function<cplx(cplx)>& fn) {
  ComplexField out(a.grid());
  parallel_for(a.size(), [&](std::size_t i) { out[i] = fn(a[i]); });
  out.merge_mask(a);
  return out;
}

}  // namespace spinsurf
