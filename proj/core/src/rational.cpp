#include "spinsurf/rational.hpp"

#include <algorithm>

#include "spinsurf/error.hpp"

namespace spinsurf {

RationalFn::RationalFn(BiPoly num) : num_(std::move(num)), base_(1.0) {}

RationalFn::RationalFn(BiPoly num, BiPoly base, int power)
    : num_(std::move(num)), base_(std::move(base)), power_(power) {
  if (base_.is_zero()) throw DomainError("RationalFn: zero denominator");
  if (power_ < 0) throw DomainError("RationalFn: negative denominator power");
  if (power_ == 0) base_ = BiPoly(1.0);
}

void RationalFn::align_with(RationalFn& o) {
  if (power_ == 0) {
    base_ = o.base_;
  } else if (o.power_ == 0) {
    o.base_ = base_;
  }
  if (base_ == o.base_) {
    if (power_ < o.power_) {
      num_ *= base_.pow(o.power_ - power_);
      power_ = o.power_;
    } else if (o.power_ < power_) {
      o.num_ *= o.base_.pow(power_ - o.power_);
      o.power_ = power_;
    }
    return;
  }
  const BiPoly da = den(), db = o.den();
  num_ *= db;
  o.num_ *= da;
  base_ = da * db;
  o.base_ = base_;
  power_ = o.power_ = 1;
}

RationalFn& RationalFn::operator+=(const RationalFn& o) {
  RationalFn rhs = o;
  align_with(rhs);
  num_ += rhs.num_;
  return *this;
}

RationalFn& RationalFn::operator-=(const RationalFn& o) {
  RationalFn rhs = o;
  align_with(rhs);
  num_ -= rhs.num_;
  return *this;
}

RationalFn& RationalFn::operator*=(const RationalFn& o) {
  num_ *= o.num_;
  if (o.power_ == 0) return *this;
  if (power_ == 0) {
    base_ = o.base_;
    power_ = o.power_;
  } else if (base_ == o.base_) {
    power_ += o.power_;
  } else {
    base_ = den() * o.den();
    power_ = 1;
  }
  return *this;
}

RationalFn RationalFn::derivative(Var v) const {
  if (power_ == 0) return RationalFn(num_.derivative(v));
  BiPoly n = num_.derivative(v) * base_ - static_cast<double>(power_) * num_ * base_.derivative(v);
  return {std::move(n), base_, power_ + 1};
}

cplx RationalFn::eval(cplx z, double t, cplx c) const {
  cplx d = 1.0;
  const cplx b = base_.eval(z, t, c);
  for (int k = 0; k < power_; ++k) d *= b;
  return num_.eval(z, t, c) / d;
}

BiPoly cross_difference(const RationalFn& a, const RationalFn& b) {
  RationalFn x = a, y = b;
  x.align_with(y);
  return x.num_ - y.num_;
}

bool identical(const RationalFn& a, const RationalFn& b) {
  RationalFn x = a, y = b;
  x.align_with(y);
  const double scale = std::max({x.num_.max_abs_coefficient(), y.num_.max_abs_coefficient(), 1.0});
  return (x.num_ - y.num_).is_identically_zero(scale);
}

}  // namespace spinsurf
