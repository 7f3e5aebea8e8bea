#include "spinsurf/bipoly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "spinsurf/error.hpp"

namespace spinsurf {
namespace {

constexpr int kBits = 12;
constexpr std::uint64_t kFieldMask = (std::uint64_t{1} << kBits) - 1;
constexpr double kExactLimit = 9007199254740992.0;  // 2^53
constexpr cplx kI{0.0, 1.0};

bool gaussian_integer(cplx c) {
  return c.real() == std::trunc(c.real()) && c.imag() == std::trunc(c.imag()) && std::abs(c.real()) < kExactLimit &&
         std::abs(c.imag()) < kExactLimit;
}

int var_slot(Var v) { return static_cast<int>(v); }

}  // namespace

BiPoly::BiPoly(cplx constant) {
  if (constant != cplx{}) terms_.emplace(0, constant);
}

BiPoly BiPoly::var(Var v, int power) {
  Exponents e{};
  e[var_slot(v)] = power;
  return monomial(1.0, e);
}

BiPoly BiPoly::monomial(cplx coeff, const Exponents& e) {
  BiPoly p;
  p.add_term(pack(e), coeff);
  return p;
}

BiPoly BiPoly::monomial(cplx coeff, int dz, int dzbar, int dt, int dc, int dcbar) {
  return monomial(coeff, Exponents{dz, dzbar, dt, dc, dcbar});
}

std::uint64_t BiPoly::pack(const Exponents& e) {
  std::uint64_t key = 0;
  for (int k = 0; k < 5; ++k) {
    if (e[k] < 0 || e[k] > kMaxDegree) throw DomainError("BiPoly: exponent out of range");
    key |= static_cast<std::uint64_t>(e[k]) << (kBits * (4 - k));
  }
  return key;
}

Exponents BiPoly::unpack(std::uint64_t key) noexcept {
  Exponents e{};
  for (int k = 0; k < 5; ++k) e[k] = static_cast<int>((key >> (kBits * (4 - k))) & kFieldMask);
  return e;
}

void BiPoly::add_term(std::uint64_t key, cplx c) {
  if (c == cplx{}) return;
  auto [it, inserted] = terms_.try_emplace(key, c);
  if (inserted) return;
  it->second += c;
  if (it->second == cplx{}) terms_.erase(it);
}

cplx BiPoly::coefficient(const Exponents& e) const {
  auto it = terms_.find(pack(e));
  return it == terms_.end() ? cplx{} : it->second;
}

int BiPoly::degree(Var v) const noexcept {
  int d = 0;
  for (const auto& [key, c] : terms_) d = std::max(d, unpack(key)[var_slot(v)]);
  return d;
}

double BiPoly::max_abs_coefficient() const noexcept {
  double m = 0.0;
  for (const auto& [key, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

bool BiPoly::integral() const noexcept {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& kv) { return gaussian_integer(kv.second); });
}

BiPoly& BiPoly::operator+=(const BiPoly& o) {
  for (const auto& [key, c] : o.terms_) add_term(key, c);
  return *this;
}

BiPoly& BiPoly::operator-=(const BiPoly& o) {
  for (const auto& [key, c] : o.terms_) add_term(key, -c);
  return *this;
}

BiPoly operator*(const BiPoly& a, const BiPoly& b) {
  BiPoly out;
  for (const auto& [ka, ca] : a.terms_) {
    const Exponents ea = BiPoly::unpack(ka);
    for (const auto& [kb, cb] : b.terms_) {
      const Exponents eb = BiPoly::unpack(kb);
      Exponents e{};
      for (int k = 0; k < 5; ++k) e[k] = ea[k] + eb[k];
      out.add_term(BiPoly::pack(e), ca * cb);
    }
  }
  return out;
}

BiPoly& BiPoly::operator*=(const BiPoly& o) { return *this = *this * o; }

BiPoly& BiPoly::operator*=(cplx s) {
  if (s == cplx{}) {
    terms_.clear();
    return *this;
  }
  for (auto it = terms_.begin(); it != terms_.end();) {
    it->second *= s;
    it = it->second == cplx{} ? terms_.erase(it) : std::next(it);
  }
  return *this;
}

BiPoly BiPoly::operator-() const { return *this * cplx(-1.0); }

BiPoly BiPoly::pow(int n) const {
  if (n < 0) throw DomainError("BiPoly::pow: negative exponent");
  BiPoly result(1.0), base = *this;
  while (n > 0) {
    if (n & 1) result *= base;
    n >>= 1;
    if (n > 0) base *= base;
  }
  return result;
}

BiPoly BiPoly::conj() const {
  BiPoly out;
  for (const auto& [key, c] : terms_) {
    Exponents e = unpack(key);
    std::swap(e[0], e[1]);
    std::swap(e[3], e[4]);
    out.add_term(pack(e), std::conj(c));
  }
  return out;
}

BiPoly BiPoly::derivative(Var v) const {
  const int s = var_slot(v);
  BiPoly out;
  for (const auto& [key, c] : terms_) {
    Exponents e = unpack(key);
    if (e[s] == 0) continue;
    const double n = e[s];
    --e[s];
    out.add_term(pack(e), c * n);
  }
  return out;
}

BiPoly BiPoly::bind(Var v, cplx value) const {
  const int s = var_slot(v);
  BiPoly out;
  for (const auto& [key, c] : terms_) {
    Exponents e = unpack(key);
    const int n = e[s];
    e[s] = 0;
    cplx factor = 1.0;
    for (int k = 0; k < n; ++k) factor *= value;
    out.add_term(pack(e), c * factor);
  }
  return out;
}

BiPoly BiPoly::bind_parameter(cplx c) const { return bind(Var::c, c).bind(Var::cbar, std::conj(c)); }

cplx BiPoly::eval(cplx z, double t, cplx c) const {
  return eval_independent({z, std::conj(z), cplx(t, 0.0), c, std::conj(c)});
}

cplx BiPoly::eval_independent(const std::array<cplx, 5>& values) const {
  std::array<std::vector<cplx>, 5> powers;
  std::array<int, 5> max_deg{};
  for (const auto& [key, c] : terms_) {
    const Exponents e = unpack(key);
    for (int k = 0; k < 5; ++k) max_deg[k] = std::max(max_deg[k], e[k]);
  }
  for (int k = 0; k < 5; ++k) {
    powers[k].resize(static_cast<std::size_t>(max_deg[k]) + 1);
    powers[k][0] = 1.0;
    for (int n = 1; n <= max_deg[k]; ++n) powers[k][n] = powers[k][n - 1] * values[k];
  }
  cplx sum{};
  for (const auto& [key, c] : terms_) {
    const Exponents e = unpack(key);
    cplx term = c;
    for (int k = 0; k < 5; ++k) term *= powers[k][e[k]];
    sum += term;
  }
  return sum;
}

bool BiPoly::is_identically_zero(double scale, double rel_tol) const noexcept {
  if (terms_.empty()) return true;
  if (integral()) return false;
  const double bound = rel_tol * scale;
  return std::all_of(terms_.begin(), terms_.end(), [&](const auto& kv) { return std::abs(kv.second) <= bound; });
}

std::string BiPoly::to_string() const {
  if (terms_.empty()) return "0";
  static constexpr const char* names[5] = {"z", "zbar", "t", "c", "cbar"};
  std::ostringstream os;
  bool first = true;
  for (const auto& [key, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << '(' << c.real() << (c.imag() < 0 ? "" : "+") << c.imag() << "i)";
    const Exponents e = unpack(key);
    for (int k = 0; k < 5; ++k) {
      if (e[k] == 0) continue;
      os << '*' << names[k];
      if (e[k] > 1) os << '^' << e[k];
    }
  }
  return os.str();
}

BiPoly heat_extend(const BiPoly& initial) {
  if (initial.depends_on(Var::zbar) || initial.depends_on(Var::t))
    throw DomainError("heat_extend: initial datum must depend on z only");
  BiPoly result;
  BiPoly deriv = initial;
  cplx factor = 1.0;  // i^n / n!
  for (int n = 0; !deriv.is_zero(); ++n) {
    if (n > 0) factor *= kI / static_cast<double>(n);
    result += deriv * BiPoly::var(Var::t, n) * factor;
    deriv = deriv.derivative(Var::z).derivative(Var::z);
  }
  return result;
}

BiPoly heat_residual(const BiPoly& f) {
  return f.derivative(Var::t) - kI * f.derivative(Var::z).derivative(Var::z);
}

namespace {

BiPoly antiderivative(const BiPoly& p, Var v) {
  BiPoly out;
  const int s = static_cast<int>(v);
  for (const auto& [key, c] : p.terms()) {
    Exponents e = BiPoly::unpack(key);
    ++e[s];
    out += BiPoly::monomial(c / static_cast<double>(e[s]), e);
  }
  return out;
}

}  // namespace

BiPoly poly_potential(const BiPoly& p, const BiPoly& q, const BiPoly& r) {
  BiPoly F = antiderivative(p, Var::z);
  F += antiderivative(q - F.derivative(Var::zbar), Var::zbar);
  F += antiderivative(r - F.derivative(Var::t), Var::t);
  const double scale = std::max({p.max_abs_coefficient(), q.max_abs_coefficient(), r.max_abs_coefficient(), 1.0});
  double defect = 0.0;
  for (const BiPoly& d : {F.derivative(Var::z) - p, F.derivative(Var::zbar) - q, F.derivative(Var::t) - r})
    if (!d.is_identically_zero(scale)) defect = std::max(defect, d.max_abs_coefficient());
  if (defect > 0.0) throw NotClosedError("poly_potential: form is not closed", defect);
  return F;
}

}  // namespace spinsurf
