#include <cmath>
#include <filesystem>
#include <numbers>

#include "doctest.h"
#include "sampling.hpp"
#include "spinsurf/dirac.hpp"
#include "spinsurf/dsii.hpp"
#include "spinsurf/error.hpp"
#include "spinsurf/grid.hpp"
#include "spinsurf/moutard.hpp"
#include "spinsurf/moutard_symbolic.hpp"
#include "spinsurf/surface.hpp"

using namespace spinsurf;
using spinsurf::testing::order;
using spinsurf::testing::sample_pair;

namespace {

constexpr cplx kI{0.0, 1.0};

QuatField constant_quat(const Grid2D& g, cplx a, cplx b) { return {ComplexField(g, a), ComplexField(g, b)}; }

// ψ in Ker D and φ in Ker D∨ for U = 0.
SpinorField kernel_psi(const Grid2D& g) {
  return sample_pair(g, [](cplx w) { return 1.0 + w * w; }, [](cplx w) { return std::conj(w); });
}
SpinorField kernel_phi(const Grid2D& g) {
  return sample_pair(g, [](cplx w) { return std::exp(0.5 * w); }, [](cplx) { return cplx(0.5, 0.5); });
}

double max_entry_error(const MatrixField& m, const std::function<Mat2(cplx)>& exact, const Grid2D& g) {
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (!m.is_singular(i)) worst = std::max(worst, (m.at(i) - exact(g.z(i))).max_abs());
  return worst;
}

// Heat-polynomial datum Ψ0 = (1, 0), Φ0 = (1, -i conj f') for a heat polynomial f.
struct HeatDatum {
  ExactSolution sol;
  cplx c;
  SpinorSource psi0 = [](cplx, double) { return std::array<cplx, 2>{1.0, 0.0}; };
  SpinorSource phi0;

  HeatDatum(const std::string& name, cplx c_) : sol(catalog(name, c_)), c(c_) {
    const BiPoly fz = sol.f.derivative(Var::z);
    phi0 = [fz](cplx w, double t) { return std::array<cplx, 2>{1.0, -kI * std::conj(fz.eval(w, t))}; };
  }

  NormalizedPair pair(const Grid2D& g, double t) const {
    TimedOptions a;
    a.build.constant = Mat2{-c, 0.0, 0.0, -std::conj(c)};
    return normalize_S_pair(build_S_timed(phi0, psi0, g, t, a), build_S_timed(psi0, phi0, g, t));
  }
};

}  // namespace

TEST_SUITE("omega") {
  TEST_CASE("identity fields") {
    const Grid2D g = make_box(1.0, 5, false);
    const QuatField id = constant_quat(g, 1.0, 0.0);
    const MatrixForm w = gamma_omega(id, id);
    CHECK(w.p.at(7) == Mat2{0.0, 0.0, kI, 0.0});
    CHECK(w.q.at(7) == Mat2{0.0, kI, 0.0, 0.0});
  }

  TEST_CASE("forms of kernel spinors are closed in both orders") {
    auto defect = [](int n, bool swap) {
      const Grid2D g = make_box(1.0, n, false);
      const QuatField Psi = quaternionize(kernel_psi(g)), Phi = quaternionize(kernel_phi(g));
      return (swap ? build_S(Psi, Phi) : build_S(Phi, Psi)).loop_defect;
    };
    for (bool swap : {false, true}) {
      const double a = defect(33, swap), b = defect(65, swap);
      CHECK(a < 1e-2);
      CHECK(order(a, b) > 1.8);
    }
  }

  TEST_CASE("non-kernel input is not closed") {
    const Grid2D g = make_box(1.0, 33, false);
    const QuatField Psi = quaternionize(sample_pair(g, [](cplx w) { return std::conj(w); }, [](cplx) { return cplx{}; }));
    BuildOptions opts;
    opts.loop_tol = 1e-6;
    CHECK_THROWS_AS(build_S(constant_quat(g, 1.0, 0.0), Psi, opts), NotClosedError);
  }
}

TEST_SUITE("omega1") {
  TEST_CASE("vanishes for constant and identity fields") {
    const Grid2D g = make_box(1.0, 9, false);
    const MatrixField a = omega1(constant_quat(g, 1.0, 0.0), constant_quat(g, 1.0, 0.0));
    const MatrixField b = omega1(constant_quat(g, cplx(0.3, 1), cplx(2, -1)), constant_quat(g, 0.5, kI));
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(a.at(i).max_abs() == 0.0);
      CHECK(b.at(i).max_abs() < 1e-15);
    }
  }

  TEST_CASE("time-augmented S reproduces the heat-polynomial surface") {
    for (const char* name : {"s1", "s2"}) {
      const HeatDatum d(name, cplx(1.0, 0.5));
      const double t = 0.4;
      auto err = [&](int n) {
        const Grid2D g = make_box(1.5, n, false);
        TimedOptions opts;
        opts.build.constant = Mat2{-d.c, 0.0, 0.0, -std::conj(d.c)};
        const SMatrix S = build_S_timed(d.phi0, d.psi0, g, t, opts);
        REQUIRE(S.time_augmented);
        return max_entry_error(S.S, [&](cplx w) {
          const cplx f = d.sol.f.eval(w, t, d.c);
          return Mat2{-f, kI * std::conj(w), kI * w, -std::conj(f)};
        }, g);
      };
      const double a = err(31), b = err(61);
      MESSAGE(std::string(name) << ": max |S - S_exact| = " << a << ", " << b);
      // s1 has a quadratic integrand, integrated exactly by the trapezoid rule
      if (a > 1e-12) CHECK(order(a, b) > 1.9);
      else CHECK(b < 1e-12);
    }
  }

  TEST_CASE("s1 at the base point is exact") {
    const Grid2D g = make_box(1.0, 11, false);
    const HeatDatum d("s1", cplx(1.0));
    TimedOptions opts;
    opts.build.constant = Mat2{-1.0, 0.0, 0.0, -1.0};
    const SMatrix S = build_S_timed(d.phi0, d.psi0, g, 0.7, opts);
    const std::size_t base = g.index(S.base.ix, S.base.iy);
    // -f(0, t) = -(2it + 1)
    CHECK(std::abs(S.S.at(base).m11 - (-(1.0 + 1.4 * kI))) < 1e-10);
  }
}

TEST_SUITE("build_S") {
  const Grid2D g = make_box(1.0, 21, false);
  const QuatField id = constant_quat(g, 1.0, 0.0);

  TEST_CASE("identity datum") {
    const SMatrix S = build_S(id, id);
    CHECK(max_entry_error(S.S, [](cplx w) { return Mat2{0.0, kI * std::conj(w), kI * w, 0.0}; }, g) < 1e-14);
  }

  TEST_CASE("identity datum read as coordinates is the plane") {
    const SMatrix S = build_S(id, id);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Point4 p = quaternion_to_point(S.S.at(i));
      const cplx w = g.z(i);
      CHECK(std::abs(p[0] + w.imag()) < 1e-14);
      CHECK(std::abs(p[1] + w.real()) < 1e-14);
      CHECK(std::abs(p[2]) + std::abs(p[3]) < 1e-14);
    }
  }

  TEST_CASE("determinant of the identity datum is |z|^2") {
    const SMatrix S = build_S(id, id);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(S.S.at(i).det() - std::norm(g.z(i))) < 1e-13);
  }

  TEST_CASE("json dump") {
    const std::string j = smatrix_json(build_S(id, id));
    CHECK(j.find("constant") != std::string::npos);
  }
}

TEST_SUITE("normalize_S_pair") {
  TEST_CASE("identity datum") {
    const Grid2D g = make_box(1.0, 11, false);
    const QuatField id = constant_quat(g, 1.0, 0.0);
    CHECK(normalize_S_pair(build_S(id, id), build_S(id, id)).residual < 1e-14);
  }

  TEST_CASE("symmetric real datum keeps equal constants") {
    const Grid2D g = make_grid({-2, 2, -1, 1}, {41, 21});
    const auto th = [](double x) { return -2.0 * std::atan(std::tanh(0.5 * x)); };
    const QuatField P = quaternionize(sample_pair(g, [&](cplx w) { return cplx(std::cos(th(w.real()))); },
                                                  [&](cplx w) { return cplx(std::sin(th(w.real()))); }));
    BuildOptions opts;
    opts.constant = Mat2::quaternion(cplx(0, 2.0), cplx(0.3, 0.1));
    const NormalizedPair pair = normalize_S_pair(build_S(P, P, opts), build_S(P, P));
    CHECK(pair.residual < 1e-12);
    CHECK((pair.S_psi_phi.constant - opts.constant).max_abs() < 1e-12);
  }

  TEST_CASE("arbitrary kernel spinors normalize below 1e-8") {
    for (int seed = 0; seed < 4; ++seed) {
      const Grid2D g = make_box(1.0, 33, false);
      const double s = 0.3 * seed;
      const QuatField Psi0 = quaternionize(sample_pair(g, [s](cplx w) { return 1.0 + s * w * w; }, [s](cplx w) { return s + std::conj(w); }));
      const QuatField Phi0 = quaternionize(kernel_phi(g));
      BuildOptions a, b;
      a.constant = Mat2::quaternion(cplx(1.0 + s, -s), cplx(s, 2.0));
      b.constant = Mat2{cplx(seed), 1.0, -2.0, kI};
      CHECK(normalize_S_pair(build_S(Phi0, Psi0, a), build_S(Psi0, Phi0, b)).residual < 1e-8);
    }
  }
}

TEST_SUITE("k_matrix") {
  const Grid2D g = make_box(1.0, 21, false);
  const QuatField id = constant_quat(g, 1.0, 0.0);

  TEST_CASE("identity datum") {
    const KData k = k_matrix(id, build_S(id, id).S, id);
    CHECK(k.pattern_residual <= 1e-10);
    CHECK(k.W.max_abs() < 1e-14);
    CHECK(testing::max_error(k.a, [](cplx w) { return -kI / w; }) < 1e-12);
    CHECK(k.a.singular_count() == 1);
  }

  TEST_CASE("pattern holds for kernel data") {
    const QuatField Psi = quaternionize(kernel_psi(g)), Phi = quaternionize(kernel_phi(g));
    BuildOptions opts;
    opts.constant = Mat2::quaternion(3.0, kI);
    CHECK(k_matrix(Psi, build_S(Phi, Psi, opts).S, Phi).pattern_residual <= 1e-10);
  }

  TEST_CASE("csv output") {
    const auto path = std::filesystem::temp_directory_path() / "spinsurf_kdata.csv";
    write_kdata_csv(path, k_matrix(id, build_S(id, id).S, id));
    CHECK(std::filesystem::file_size(path) > 0);
    std::filesystem::remove(path);
  }
}

TEST_SUITE("moutard_spinors") {
  TEST_CASE("self-transformation annihilates") {
    const Grid2D g = make_box(1.0, 17, false);
    const QuatField Psi0 = quaternionize(kernel_psi(g)), Phi0 = quaternionize(kernel_phi(g));
    BuildOptions opts;
    opts.constant = Mat2::quaternion(2.0, 1.0);
    const NormalizedPair pair = normalize_S_pair(build_S(Phi0, Psi0, opts), build_S(Psi0, Phi0));
    const MoutardSpinors m = moutard_spinors(Psi0, Phi0, pair, Psi0, Phi0, pair.S_phi_psi.constant, pair.S_psi_phi.constant);
    for (std::size_t i = 0; i < g.size(); ++i) {
      REQUIRE(m.Psi.at(i) == Mat2{});
      REQUIRE(m.Phi.at(i) == Mat2{});
    }
  }

  TEST_CASE("plane datum: transformed spinors solve the new equations") {
    auto residuals = [](int n) {
      const Grid2D g = make_box(1.0, n, false);
      const QuatField id = constant_quat(g, 1.0, 0.0);
      BuildOptions opts;
      opts.constant = Mat2::quaternion(cplx(0.5, 0.7), cplx(2.0, -0.4));
      const NormalizedPair pair = normalize_S_pair(build_S(id, id, opts), build_S(id, id));
      const QuatField Psi = quaternionize(sample_pair(g, [](cplx w) { return w; }, [](cplx w) { return std::conj(w); }));
      const MoutardSpinors m = moutard_spinors(id, id, pair, Psi, Psi);
      const KData k = k_matrix(id, pair.S_phi_psi.S, id);
      return std::array<double, 2>{residual_norm(apply_D(k.W, spinor_column(m.Psi)), 2),
                                   residual_norm(apply_Dvee(k.W, spinor_column(m.Phi)), 2)};
    };
    const auto a = residuals(33), b = residuals(65);
    for (int j = 0; j < 2; ++j) {
      CHECK(a[j] < 1e-2);
      CHECK(order(a[j], b[j]) > 1.8);
    }
  }

  TEST_CASE("real potential with phi = psi stays real") {
    const Grid2D g = make_grid({-2, 2, -1, 1}, {41, 21});
    const auto th = [](double x) { return -2.0 * std::atan(std::tanh(0.5 * x)); };
    const QuatField P = quaternionize(sample_pair(g, [&](cplx w) { return cplx(std::cos(th(w.real()))); },
                                                  [&](cplx w) { return cplx(std::sin(th(w.real()))); }));
    BuildOptions opts;
    opts.constant = Mat2::quaternion(cplx(0, 2.0), cplx(0.3, 0.1));
    const NormalizedPair pair = normalize_S_pair(build_S(P, P, opts), build_S(P, P));
    const KData k = k_matrix(P, pair.S_phi_psi.S, P);
    double im = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) im = std::max(im, std::abs(k.W[i].imag()));
    CHECK(k.W.max_abs() > 0.1);
    CHECK(im < 1e-12);
  }
}

TEST_SUITE("moutard_dsii") {
  TEST_CASE("plane datum") {
    const Grid2D g = make_box(1.0, 81, false);
    const QuatField id = constant_quat(g, 1.0, 0.0);
    const KData k = k_matrix(id, build_S(id, id).S, id);
    const DsiiPair p = moutard_dsii(ComplexField(g), ComplexField(g), k);
    CHECK(p.U.max_abs() < 1e-14);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const cplx w = g.z(i);
      if (std::abs(w) < 0.5 || p.V.is_singular(i) || g.on_boundary(g.ix_of(i), g.iy_of(i))) continue;
      worst = std::max(worst, std::abs(p.V[i] - (-2.0 / (w * w))) * std::norm(w));
    }
    CHECK(worst < 1e-2);
  }

  TEST_CASE("trivial background reproduces the heat-polynomial solution") {
    for (const char* name : {"s1", "s2"}) {
      const BiPoly f = name == std::string("s1") ? s1_datum() : s2_datum();
      const SymbolicMoutard m = symbolic_moutard_trivial(f);
      const BiPoly z = BiPoly::var(Var::z), zb = BiPoly::var(Var::zbar);
      const BiPoly delta = z * zb + f * f.conj();
      const RationalFn U(kI * (z * f.derivative(Var::z) - f), delta);
      const RationalFn a(-kI * (zb + f.conj() * f.derivative(Var::z)), delta);
      CHECK(identical(m.U, U));
      CHECK(identical(m.a, a));
      CHECK(identical(m.V, 2.0 * kI * a.derivative(Var::z)));
    }
  }

  TEST_CASE("numeric Moutard data matches the exact solution") {
    const HeatDatum d("s1", cplx(1.0));
    const Grid2D g = make_box(2.0, 41, false);
    const double t = 0.3;
    const NormalizedPair pair = d.pair(g, t);
    const QuatField Psi0 = quaternionize(sample_spinor(d.psi0, g, t)), Phi0 = quaternionize(sample_spinor(d.phi0, g, t));
    const KData k = k_matrix(Psi0, pair.S_phi_psi.S, Phi0);
    CHECK(testing::max_error(k.W, d.sol.U_sampler(t, d.c)) < 1e-12);
    CHECK(testing::max_error(k.a, [&](cplx w) { return d.sol.a.eval(w, t); }) < 1e-12);
  }

  TEST_CASE("DSII residual of the transformed pair is small") {
    const HeatDatum d("s1", cplx(1.0));
    auto res = [&](int n) {
      const Grid2D g = make_box(2.0, n, false);
      const double t = 0.3, dt = 1e-3;
      std::array<ComplexField, 3> U;
      ComplexField V;
      for (int j = 0; j < 3; ++j) {
        const double tj = t + (j - 1) * dt;
        const QuatField Psi0 = quaternionize(sample_spinor(d.psi0, g, tj)), Phi0 = quaternionize(sample_spinor(d.phi0, g, tj));
        const DsiiPair p = moutard_dsii(ComplexField(g), ComplexField(g), k_matrix(Psi0, d.pair(g, tj).S_phi_psi.S, Phi0));
        U[j] = p.U;
        if (j == 1) V = p.V;
      }
      return dsii_residual({&U[0], &U[1], &U[2]}, V, dt).max;
    };
    const double a = res(81), b = res(161);
    MESSAGE("DSII residual " << a << ", " << b);
    CHECK(b < 0.5);
    CHECK(order(a, b) > 1.8);
  }
}

TEST_SUITE("transpose mode") {
  TEST_CASE("conjugate transpose does not give Dirac solutions") {
    const Grid2D g = make_box(1.0, 33, false);
    const QuatField id = constant_quat(g, 1.0, 0.0);
    const QuatField Psi = quaternionize(kernel_psi(g)), Phi = quaternionize(kernel_phi(g));
    BuildOptions opts;
    opts.constant = Mat2::quaternion(cplx(0.5, 0.7), cplx(2.0, -0.4));
    opts.mode = TransposeMode::conjugate_transpose;
    opts.loop_tol = 1e9;
    BuildOptions other = opts;
    other.constant = {};
    const auto mode = TransposeMode::conjugate_transpose;
    const NormalizedPair pair = normalize_S_pair(build_S(Phi, Psi, opts), build_S(Psi, Phi, other), mode, 1e9);
    const QuatField P2 = quaternionize(sample_pair(g, [](cplx w) { return w; }, [](cplx w) { return std::conj(w); }));
    const MoutardSpinors m = moutard_spinors(Psi, Phi, pair, P2, P2, {}, {}, mode);
    const KData k = k_matrix(Psi, pair.S_phi_psi.S, Phi, mode);
    CHECK(residual_norm(apply_D(k.W, spinor_column(m.Psi)), 2) > 1e-2);
    (void)id;
  }
}
