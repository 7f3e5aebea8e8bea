#include "spinsurf/spinor.hpp"

#include <algorithm>
#include <cmath>

#include "spinsurf/derivative.hpp"
#include "spinsurf/error.hpp"
#include "spinsurf/field_io.hpp"
#include "spinsurf/parallel.hpp"

namespace spinsurf {

Mat2 Mat2::inverse() const {
  const cplx d = det();
  if (d == cplx{}) throw DomainError("Mat2::inverse: singular matrix");
  return {m22 / d, -m12 / d, -m21 / d, m11 / d};
}

double Mat2::max_abs() const { return std::max({std::abs(m11), std::abs(m12), std::abs(m21), std::abs(m22)}); }

double Mat2::quaternion_defect() const {
  return std::max(std::abs(m22 - std::conj(m11)), std::abs(m12 + std::conj(m21)));
}

Mat2& Mat2::operator+=(const Mat2& o) {
  m11 += o.m11;
  m12 += o.m12;
  m21 += o.m21;
  m22 += o.m22;
  return *this;
}

Mat2& Mat2::operator-=(const Mat2& o) {
  m11 -= o.m11;
  m12 -= o.m12;
  m21 -= o.m21;
  m22 -= o.m22;
  return *this;
}

Mat2& Mat2::operator*=(cplx s) {
  m11 *= s;
  m12 *= s;
  m21 *= s;
  m22 *= s;
  return *this;
}

Mat2 operator*(const Mat2& a, const Mat2& b) {
  return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22, a.m21 * b.m11 + a.m22 * b.m21,
          a.m21 * b.m12 + a.m22 * b.m22};
}

SpinorField::SpinorField(ComplexField a, ComplexField b) : psi1(std::move(a)), psi2(std::move(b)) {
  require_same_grid(psi1, psi2, "SpinorField");
}

QuatField::QuatField(ComplexField a_, ComplexField b_) : a(std::move(a_)), b(std::move(b_)) {
  require_same_grid(a, b, "QuatField");
}

MatrixField::MatrixField(const Grid2D& g) : e{ComplexField(g), ComplexField(g), ComplexField(g), ComplexField(g)} {}

MatrixField::MatrixField(const QuatField& q) : MatrixField(q.grid()) {
  for (std::size_t i = 0; i < q.a.size(); ++i) set(i, q.at(i));
  for (auto& c : e) {
    c.merge_mask(q.a);
    c.merge_mask(q.b);
  }
}

void MatrixField::set(std::size_t i, const Mat2& m) {
  e[0][i] = m.m11;
  e[1][i] = m.m12;
  e[2][i] = m.m21;
  e[3][i] = m.m22;
}

bool MatrixField::is_singular(std::size_t i) const noexcept {
  return std::any_of(e.begin(), e.end(), [i](const ComplexField& c) { return c.is_singular(i); });
}

void MatrixField::flag_singular(std::size_t i) {
  for (auto& c : e) c.flag_singular(i);
}

double MatrixField::quaternion_defect() const {
  double d = 0.0;
  for (std::size_t i = 0; i < e[0].size(); ++i)
    if (!is_singular(i)) d = std::max(d, at(i).quaternion_defect());
  return d;
}

void PotentialPair::validate(double tol) const {
  if (V) require_same_grid(U, *V, "PotentialPair");
  if (!real_mode) return;
  double im = 0.0;
  for (std::size_t i = 0; i < U.size(); ++i)
    if (!U.is_singular(i)) im = std::max(im, std::abs(U[i].imag()));
  if (im > tol * std::max(1.0, U.max_abs())) throw DomainError("PotentialPair: real mode but U has an imaginary part");
}

SpinorField sigma(const SpinorField& psi) {
  SpinorField out{map(psi.psi2, [](cplx v) { return -std::conj(v); }),
                  map(psi.psi1, [](cplx v) { return std::conj(v); })};
  return out;
}

QuatField quaternionize(const SpinorField& psi) { return {psi.psi1, psi.psi2}; }

SpinorField first_column(const QuatField& q) { return {q.a, q.b}; }

QuatField operator*(const QuatField& x, const QuatField& y) {
  require_same_grid(x.a, y.a, "QuatField product");
  // [[a,-b̄],[b,ā]]·[[c,-d̄],[d,c̄]] has first column (ac - b̄d, bc + ād).
  ComplexField a(x.grid()), b(x.grid());
  parallel_for(a.size(), [&](std::size_t i) {
    a[i] = x.a[i] * y.a[i] - std::conj(x.b[i]) * y.b[i];
    b[i] = x.b[i] * y.a[i] + std::conj(x.a[i]) * y.b[i];
  });
  for (const ComplexField* f : {&x.a, &x.b, &y.a, &y.b}) {
    a.merge_mask(*f);
    b.merge_mask(*f);
  }
  return {std::move(a), std::move(b)};
}

GaugeResult gauge_transform(const SpinorField& psi, const SpinorField& phi, const ComplexField& U,
                            const ComplexField& h) {
  require_same_grid(psi.psi1, phi.psi1, "gauge_transform");
  require_same_grid(psi.psi1, U, "gauge_transform");
  require_same_grid(psi.psi1, h, "gauge_transform");
  const double dbar = wirtinger_derivative(h, Direction::zbar).max_abs();
  if (dbar > 1e-6 * h.max_abs() + 1e-300)
    throw NotHolomorphicError("gauge_transform: gauge function is not holomorphic", dbar);
  const auto e_h = map(h, [](cplx v) { return std::exp(v); });
  const auto e_hbar = map(h, [](cplx v) { return std::exp(std::conj(v)); });
  const auto e_mh = map(h, [](cplx v) { return std::exp(-v); });
  const auto e_mhbar = map(h, [](cplx v) { return std::exp(-std::conj(v)); });
  const auto e_u = map(h, [](cplx v) { return std::exp(std::conj(v) - v); });
  return {SpinorField{psi.psi1 * e_h, psi.psi2 * e_hbar}, SpinorField{phi.psi1 * e_mh, phi.psi2 * e_mhbar}, U * e_u};
}

void write_spinor_csv(const std::filesystem::path& path, const SpinorField& psi) {
  write_fields_csv(path, {ColumnPair{"re1", "im1"}, ColumnPair{"re2", "im2"}}, {&psi.psi1, &psi.psi2});
}

SpinorField read_spinor_csv(const std::filesystem::path& path) {
  auto fields = read_fields_csv(path);
  if (fields.size() != 2) throw FormatError(path.string() + ": expected two spinor components");
  return {std::move(fields[0]), std::move(fields[1])};
}

}  // namespace spinsurf
