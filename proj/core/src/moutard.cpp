#include "spinsurf/moutard.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "spinsurf/error.hpp"
#include "spinsurf/field_io.hpp"
#include "spinsurf/parallel.hpp"
#include "spinsurf/quadrature.hpp"

namespace spinsurf {
namespace {

constexpr cplx kI{0.0, 1.0};

// P1 M keeps the first row of M, P2 M the second; M P1 keeps the first
// column, M P2 the second.
Mat2 row1(const Mat2& m) { return {m.m11, m.m12, 0.0, 0.0}; }
Mat2 row2(const Mat2& m) { return {0.0, 0.0, m.m21, m.m22}; }

Mat2 adjugate(const Mat2& m) { return {m.m22, -m.m12, -m.m21, m.m11}; }

MatrixField matrix_field(const QuatField& q) { return MatrixField(q); }

double max_entry(const MatrixField& m) {
  double s = 0.0;
  for (const auto& e : m.e) s = std::max(s, e.max_abs());
  return s;
}

}  // namespace

Mat2 apply_transpose(const Mat2& m, TransposeMode mode) {
  return mode == TransposeMode::transpose ? m.transpose() : m.adjoint();
}

Mat2 omega_dz(const Mat2& Phi, const Mat2& Psi, TransposeMode mode) {
  return cplx(0.0, -1.0) * (apply_transpose(Phi, mode) * row1(Psi));
}

Mat2 omega_dzbar(const Mat2& Phi, const Mat2& Psi, TransposeMode mode) {
  return kI * (apply_transpose(Phi, mode) * row2(Psi));
}

Mat2 omega1_at(const Mat2& Phi, const Mat2& Phi_z, const Mat2& Phi_zbar, const Mat2& Psi, const Mat2& Psi_z,
               const Mat2& Psi_zbar, TransposeMode mode) {
  const Mat2 left = apply_transpose(Phi_z, mode) * Mat2{1.0, 0.0, 0.0, 0.0} +
                    apply_transpose(Phi_zbar, mode) * Mat2{0.0, 0.0, 0.0, 1.0};
  return left * Psi - apply_transpose(Phi, mode) * (row1(Psi_z) + row2(Psi_zbar));
}

MatrixForm omega(const QuatField& Phi, const QuatField& Psi, TransposeMode mode) {
  require_same_grid(Phi.a, Psi.a, "omega");
  const Grid2D& g = Phi.grid();
  MatrixForm w{MatrixField(g), MatrixField(g)};
  parallel_for(g.size(), [&](std::size_t i) {
    const Mat2 F = Phi.at(i), P = Psi.at(i);
    w.p.set(i, omega_dz(F, P, mode));
    w.q.set(i, omega_dzbar(F, P, mode));
  });
  for (int k = 0; k < 4; ++k)
    for (const ComplexField* f : {&Phi.a, &Phi.b, &Psi.a, &Psi.b}) {
      w.p.e[k].merge_mask(*f);
      w.q.e[k].merge_mask(*f);
    }
  return w;
}

MatrixForm gamma_omega(const QuatField& Phi, const QuatField& Psi, TransposeMode mode) {
  MatrixForm w = omega(Phi, Psi, mode);
  const Mat2 G = Mat2::gamma();
  parallel_for(Phi.grid().size(), [&](std::size_t i) {
    w.p.set(i, G * w.p.at(i));
    w.q.set(i, G * w.q.at(i));
  });
  return w;
}

MatrixField omega1(const QuatField& Phi, const QuatField& Psi, Scheme scheme, TransposeMode mode) {
  require_same_grid(Phi.a, Psi.a, "omega1");
  const MatrixField F = matrix_field(Phi), P = matrix_field(Psi);
  MatrixField Fz(Phi.grid()), Fzb(Phi.grid()), Pz(Phi.grid()), Pzb(Phi.grid());
  for (int k = 0; k < 4; ++k) {
    Fz.e[k] = wirtinger_derivative(F.e[k], Direction::z, scheme);
    Fzb.e[k] = wirtinger_derivative(F.e[k], Direction::zbar, scheme);
    Pz.e[k] = wirtinger_derivative(P.e[k], Direction::z, scheme);
    Pzb.e[k] = wirtinger_derivative(P.e[k], Direction::zbar, scheme);
  }
  MatrixField out(Phi.grid());
  parallel_for(out.grid().size(), [&](std::size_t i) {
    out.set(i, omega1_at(F.at(i), Fz.at(i), Fzb.at(i), P.at(i), Pz.at(i), Pzb.at(i), mode));
  });
  for (int k = 0; k < 4; ++k)
    for (const MatrixField* m : {&Fz, &Fzb, &Pz, &Pzb})
      for (const auto& e : m->e) out.e[k].merge_mask(e);
  return out;
}

SMatrix build_S(const QuatField& Phi, const QuatField& Psi, const BuildOptions& opts) {
  const MatrixForm w = gamma_omega(Phi, Psi, opts.mode);
  const Grid2D& g = Phi.grid();
  SMatrix s;
  s.S = MatrixField(g);
  s.base = opts.base.value_or(g.nearest(0.0));
  s.constant = opts.constant;
  const cplx c[4] = {opts.constant.m11, opts.constant.m12, opts.constant.m21, opts.constant.m22};
  double defect = 0.0;
  for (int k = 0; k < 4; ++k) {
    const Form1 form{w.p.e[k], w.q.e[k]};
    ComplexField a = primitive(form, s.base, PathOrder::x_first);
    const ComplexField b = primitive(form, s.base, PathOrder::y_first);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (a.is_singular(i) || b.is_singular(i)) continue;
      defect = std::max(defect, std::abs(a[i] - b[i]));
      a[i] += c[k];
    }
    a.merge_mask(b);
    s.S.e[k] = std::move(a);
  }
  s.loop_defect = defect;
  if (!std::isfinite(defect) || defect > opts.loop_tol * std::max(1.0, max_entry(s.S)))
    throw NotClosedError("build_S: omega is not closed on this grid", defect);
  return s;
}

SpinorField sample_spinor(const SpinorSource& src, const Grid2D& grid, double t) {
  ComplexField a(grid), b(grid);
  parallel_for(grid.size(), [&](std::size_t i) {
    const auto v = src(grid.z(i), t);
    a[i] = v[0];
    b[i] = v[1];
  });
  return {std::move(a), std::move(b)};
}

namespace {

struct LocalJet {
  Mat2 value, dz, dzbar;
};

LocalJet jet(const SpinorSource& src, cplx z, double t, double h) {
  auto q = [&](cplx p) {
    const auto v = src(p, t);
    return Mat2::quaternion(v[0], v[1]);
  };
  auto d = [&](cplx dir) {
    return (1.0 / (12.0 * h)) * (q(z - 2.0 * h * dir) - 8.0 * q(z - h * dir) + 8.0 * q(z + h * dir) -
                                 q(z + 2.0 * h * dir));
  };
  const Mat2 dx = d(1.0), dy = d(kI);
  return {q(z), 0.5 * (dx - kI * dy), 0.5 * (dx + kI * dy)};
}

}  // namespace

SMatrix build_S_timed(const SpinorSource& phi, const SpinorSource& psi, const Grid2D& grid, double t,
                      const TimedOptions& opts) {
  const NodeIndex base = opts.build.base.value_or(grid.nearest(0.0));
  const cplx z0 = grid.z(base.ix, base.iy);
  int n = std::max(2, opts.time_intervals);
  if (n % 2) ++n;
  const double dt = (t - opts.t0) / n;
  Mat2 integral{};
  if (dt != 0.0) {
    for (int k = 0; k <= n; ++k) {
      const double tau = opts.t0 + k * dt;
      const LocalJet F = jet(phi, z0, tau, opts.fd_step), P = jet(psi, z0, tau, opts.fd_step);
      const double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
      integral += (w * dt / 3.0) * omega1_at(F.value, F.dz, F.dzbar, P.value, P.dz, P.dzbar, opts.build.mode);
    }
  }
  BuildOptions b = opts.build;
  b.base = base;
  b.constant = opts.build.constant + Mat2::gamma() * integral;
  const SpinorField f = sample_spinor(phi, grid, t), p = sample_spinor(psi, grid, t);
  SMatrix s = build_S(quaternionize(f), quaternionize(p), b);
  s.constant = opts.build.constant;
  s.time = t;
  s.time_augmented = true;
  return s;
}

NormalizedPair normalize_S_pair(const SMatrix& S_phi_psi, const SMatrix& S_psi_phi, TransposeMode mode, double tol) {
  require_same_grid(S_phi_psi.S.e[0], S_psi_phi.S.e[0], "normalize_S_pair");
  const Grid2D& g = S_phi_psi.S.grid();
  const Mat2 G = Mat2::gamma();
  std::vector<Mat2> diff;
  std::vector<std::size_t> nodes;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (S_phi_psi.S.is_singular(i) || S_psi_phi.S.is_singular(i)) continue;
    diff.push_back(G * apply_transpose(S_phi_psi.S.at(i), mode) * G - S_psi_phi.S.at(i));
    nodes.push_back(i);
  }
  if (diff.empty()) throw NormalizationError("normalize_S_pair: no usable nodes", INFINITY);
  std::vector<cplx> col(diff.size());
  cplx mean[4];
  for (int k = 0; k < 4; ++k) {
    for (std::size_t j = 0; j < diff.size(); ++j) {
      const Mat2& d = diff[j];
      col[j] = k == 0 ? d.m11 : k == 1 ? d.m12 : k == 2 ? d.m21 : d.m22;
    }
    mean[k] = pairwise_sum(std::span<const cplx>(col)) / static_cast<double>(col.size());
  }
  const Mat2 shift{mean[0], mean[1], mean[2], mean[3]};
  NormalizedPair out{S_phi_psi, S_psi_phi, 0.0};
  out.S_psi_phi.constant += shift;
  double worst = 0.0;
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    out.S_psi_phi.S.set(nodes[j], out.S_psi_phi.S.at(nodes[j]) + shift);
    worst = std::max(worst, (diff[j] - shift).max_abs());
  }
  out.residual = worst / std::max(1.0, std::max(max_entry(S_phi_psi.S), max_entry(out.S_psi_phi.S)));
  if (!(out.residual <= tol))
    throw NormalizationError("normalize_S_pair: no constant satisfies the normalization", out.residual);
  return out;
}

namespace {

std::vector<std::uint8_t> singular_dets(const MatrixField& S) {
  const std::size_t n = S.grid().size();
  std::vector<double> det(n, 0.0);
  double peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (S.is_singular(i)) continue;
    det[i] = std::abs(S.at(i).det());
    if (std::isfinite(det[i])) peak = std::max(peak, det[i]);
  }
  std::vector<std::uint8_t> bad(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    bad[i] = S.is_singular(i) || !std::isfinite(det[i]) || det[i] <= 1e-12 * peak ? 1 : 0;
  return bad;
}

}  // namespace

KData k_matrix(const QuatField& Psi, const MatrixField& S, const QuatField& Phi, TransposeMode mode) {
  require_same_grid(Psi.a, S.e[0], "k_matrix");
  require_same_grid(Phi.a, S.e[0], "k_matrix");
  const Grid2D& g = S.grid();
  const Mat2 G = Mat2::gamma(), Ginv = -1.0 * Mat2::gamma();
  const auto bad = singular_dets(S);
  KData k{ComplexField(g), ComplexField(g), 0.0};
  std::vector<double> defect(g.size(), 0.0), scale(g.size(), 0.0);
  parallel_for(g.size(), [&](std::size_t i) {
    if (bad[i]) return;
    const Mat2 K = Psi.at(i) * (adjugate(S.at(i)) * (1.0 / S.at(i).det())) * G * apply_transpose(Phi.at(i), mode) * Ginv;
    const cplx W = kI * std::conj(K.m11);
    k.W[i] = W;
    k.a[i] = K.m12;
    defect[i] = std::max(std::abs(K.m22 + kI * W), std::abs(K.m21 + std::conj(K.m12)));
    scale[i] = K.max_abs();
  });
  double peak = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (bad[i]) {
      k.W.flag_singular(i);
      k.a.flag_singular(i);
      continue;
    }
    peak = std::max(peak, scale[i]);
  }
  for (std::size_t i = 0; i < g.size(); ++i)
    if (!bad[i]) k.pattern_residual = std::max(k.pattern_residual, defect[i] / std::max(peak, 1e-300));
  if (k.pattern_residual > 1e-10)
    throw NumericalError("k_matrix: K does not have the [[iW̄, a], [-ā, -iW]] pattern");
  return k;
}

namespace {

MatrixField left_multiply_inverse(const QuatField& X, const MatrixField& S, const MatrixField* R) {
  const Grid2D& g = S.grid();
  const auto bad = singular_dets(S);
  MatrixField out(g);
  parallel_for(g.size(), [&](std::size_t i) {
    if (bad[i]) return;
    const Mat2 Si = S.at(i);
    Mat2 inner;
    if (!R)
      inner = adjugate(Si) * (1.0 / Si.det());
    else if (R->at(i) == Si)
      inner = Mat2::identity();
    else
      inner = (adjugate(Si) * R->at(i)) * (1.0 / Si.det());
    out.set(i, X.at(i) * inner);
  });
  for (std::size_t i = 0; i < g.size(); ++i)
    if (bad[i] || (R && R->is_singular(i))) out.flag_singular(i);
  return out;
}

}  // namespace

MoutardSpinors moutard_spinors(const QuatField& Psi0, const QuatField& Phi0, const NormalizedPair& pair,
                               const QuatField& Psi, const QuatField& Phi, const Mat2& c_psi, const Mat2& c_phi,
                               TransposeMode mode) {
  BuildOptions bpsi{pair.S_phi_psi.base, c_psi, mode};
  bpsi.loop_tol = INFINITY;
  BuildOptions bphi{pair.S_psi_phi.base, c_phi, mode};
  bphi.loop_tol = INFINITY;
  const SMatrix S_phi0_psi = build_S(Phi0, Psi, bpsi);
  const SMatrix S_psi0_phi = build_S(Psi0, Phi, bphi);
  MatrixField tPsi = left_multiply_inverse(Psi0, pair.S_phi_psi.S, &S_phi0_psi.S);
  MatrixField tPhi = left_multiply_inverse(Phi0, pair.S_psi_phi.S, &S_psi0_phi.S);
  const MatrixField mPsi(Psi), mPhi(Phi);
  for (std::size_t i = 0; i < tPsi.grid().size(); ++i) {
    if (!tPsi.is_singular(i)) tPsi.set(i, mPsi.at(i) - tPsi.at(i));
    if (!tPhi.is_singular(i)) tPhi.set(i, mPhi.at(i) - tPhi.at(i));
  }
  return {std::move(tPsi), std::move(tPhi)};
}

MoutardSpinors inverted_spinors(const QuatField& Psi0, const QuatField& Phi0, const NormalizedPair& pair) {
  return {left_multiply_inverse(Psi0, pair.S_phi_psi.S, nullptr), left_multiply_inverse(Phi0, pair.S_psi_phi.S, nullptr)};
}

SpinorField spinor_column(const MatrixField& m) { return {m.e[0], m.e[2]}; }

DsiiPair moutard_dsii(const ComplexField& U, const ComplexField& V, const KData& k, Scheme scheme) {
  require_same_grid(U, k.W, "moutard_dsii");
  require_same_grid(V, k.a, "moutard_dsii");
  DsiiPair out{U + k.W, V + kI * 2.0 * wirtinger_derivative(k.a, Direction::z, scheme)};
  return out;
}

void write_kdata_csv(const std::filesystem::path& path, const KData& k) {
  write_fields_csv(path, {ColumnPair{"reW", "imW"}, ColumnPair{"rea", "ima"}}, {&k.W, &k.a});
}

std::string smatrix_json(const SMatrix& s) {
  using nlohmann::json;
  auto c = [](cplx v) { return json::array({v.real(), v.imag()}); };
  json j;
  j["grid"] = json::parse(grid_json(s.S.grid()));
  j["base"] = {s.base.ix, s.base.iy};
  j["time"] = s.time;
  j["time_augmented"] = s.time_augmented;
  j["loop_defect"] = s.loop_defect;
  j["constant"] = {c(s.constant.m11), c(s.constant.m12), c(s.constant.m21), c(s.constant.m22)};
  json entries = json::array();
  for (std::size_t i = 0; i < s.S.grid().size(); ++i) {
    if (s.S.is_singular(i)) {
      entries.push_back(nullptr);
      continue;
    }
    const Mat2 m = s.S.at(i);
    entries.push_back({c(m.m11), c(m.m12), c(m.m21), c(m.m22)});
  }
  j["S"] = entries;
  return j.dump();
}

}  // namespace spinsurf
