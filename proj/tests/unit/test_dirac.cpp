#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "doctest.h"
#include "sampling.hpp"
#include "spinsurf/dirac.hpp"
#include "spinsurf/dsii.hpp"
#include "spinsurf/error.hpp"
#include "spinsurf/grid.hpp"
#include "spinsurf/spinor.hpp"
#include "spinsurf/surface.hpp"

using namespace spinsurf;
using spinsurf::testing::sample_pair;

namespace {

constexpr cplx kI{0.0, 1.0};

// Real solution of Dψ = 0 for U = N/(2 cosh x): ψ = (cos θ, sin θ) with
// θ' = -2U, i.e. θ = -N gd(x).
double theta(double x, int N) { return -N * 2.0 * std::atan(std::tanh(0.5 * x)); }

SpinorField soliton_spinor(const Grid2D& g, int N) {
  return sample_pair(
      g, [N](cplx w) { return cplx(std::cos(theta(w.real(), N))); },
      [N](cplx w) { return cplx(std::sin(theta(w.real(), N))); });
}

ComplexField soliton_potential(const Grid2D& g, int N) {
  return ComplexField::sample(g, [N](cplx w) { return cplx(N / (2.0 * std::cosh(w.real()))); });
}

SpinorField random_spinor(const Grid2D& g, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> n;
  SpinorField s{ComplexField(g), ComplexField(g)};
  for (std::size_t i = 0; i < g.size(); ++i) {
    s.psi1[i] = {n(rng), n(rng)};
    s.psi2[i] = {n(rng), n(rng)};
  }
  return s;
}

double max_diff(const SpinorField& a, const SpinorField& b) {
  return std::max((a.psi1 - b.psi1).max_abs(), (a.psi2 - b.psi2).max_abs());
}

}  // namespace

TEST_SUITE("apply_D") {
  TEST_CASE("minimal surface data is in the kernel") {
    const Grid2D g = make_box(1.0, 21, false);
    const auto psi = sample_pair(g, [](cplx w) { return w * w; }, [](cplx w) { return std::conj(w) * std::conj(w); });
    CHECK(residual_norm(apply_D(ComplexField(g), psi)) < 1e-12);
  }

  TEST_CASE("conjugate coordinate in the first slot") {
    const Grid2D g = make_box(1.0, 9, false);
    const auto psi = sample_pair(g, [](cplx w) { return std::conj(w); }, [](cplx) { return cplx{}; });
    const SpinorField r = apply_D(ComplexField(g), psi);
    CHECK(r.psi1.max_abs() < 1e-13);
    CHECK(testing::max_error(r.psi2, [](cplx) { return cplx(-1.0); }) < 1e-13);
  }

  TEST_CASE("soliton spinor converges at second order") {
    auto res = [](int n) {
      const Grid2D g = make_grid({-6, 6, 0, 1}, {n, 5}, {false, true});
      return residual_norm(apply_D(soliton_potential(g, 2), soliton_spinor(g, 2)), 2);
    };
    const double a = res(241), b = res(481);
    CHECK(a < 1e-2);
    CHECK(testing::order(a, b) > 1.8);
  }

  TEST_CASE("grid mismatch is an error") {
    const auto psi = random_spinor(make_box(1.0, 9, false), 1);
    CHECK_THROWS_AS(apply_D(ComplexField(make_box(1.0, 11, false)), psi), GridMismatchError);
  }

  TEST_CASE("real mode rejects complex potentials") {
    const Grid2D g = make_box(1.0, 9, false);
    PotentialPair p{ComplexField(g, kI), std::nullopt, true};
    CHECK_THROWS_AS(apply_D(p, random_spinor(g, 2)), DomainError);
  }
}

TEST_SUITE("apply_Dvee") {
  TEST_CASE("coincides with D for real potentials") {
    const Grid2D g = make_grid({-6, 6, 0, 1}, {121, 5}, {false, true});
    const auto U = soliton_potential(g, 1);
    const auto psi = random_spinor(g, 3);
    CHECK(max_diff(apply_D(U, psi), apply_Dvee(U, psi)) == 0.0);
  }

  TEST_CASE("constant first component") {
    const Grid2D g = make_box(1.0, 9, false);
    const auto phi = sample_pair(g, [](cplx) { return cplx(1.0); }, [](cplx) { return cplx{}; });
    CHECK(residual_norm(apply_Dvee(ComplexField(g), phi)) == 0.0);
  }

  TEST_CASE("swaps U and its conjugate on the diagonal") {
    const Grid2D g = make_box(1.0, 9, false);
    const auto U = ComplexField::sample(g, [](cplx w) { return w; });
    const auto psi = sample_pair(g, [](cplx) { return cplx(1.0); }, [](cplx) { return cplx(1.0); });
    const SpinorField d = apply_D(U, psi), dv = apply_Dvee(U, psi);
    CHECK(testing::max_error(d.psi1, [](cplx w) { return w; }) < 1e-14);
    CHECK(testing::max_error(dv.psi1, [](cplx w) { return std::conj(w); }) < 1e-14);
    CHECK(testing::max_error(dv.psi2, [](cplx w) { return w; }) < 1e-14);
  }

  TEST_CASE("heat-polynomial datum phi solves the conjugate equation") {
    const auto sol = catalog("s1", cplx(1.0));
    const Grid2D g = make_box(2.0, 33, false);
    // Φ0 = (1, -i conj f'), f' = 2z for s1
    const auto phi = sample_pair(g, [](cplx) { return cplx(1.0); }, [](cplx w) { return -kI * 2.0 * std::conj(w); });
    CHECK(residual_norm(apply_Dvee(ComplexField(g), phi)) < 1e-12);
  }
}

TEST_SUITE("sigma") {
  TEST_CASE("sigma squared is minus identity") {
    const auto psi = random_spinor(make_box(1.0, 9, false), 4);
    const SpinorField s2 = sigma(sigma(psi));
    for (std::size_t i = 0; i < psi.psi1.size(); ++i) {
      REQUIRE(s2.psi1[i] == -psi.psi1[i]);
      REQUIRE(s2.psi2[i] == -psi.psi2[i]);
    }
  }

  TEST_CASE("sigma of the first basis spinor") {
    const Grid2D g = make_box(1.0, 5, false);
    const SpinorField s = sigma(sample_pair(g, [](cplx) { return cplx(1.0); }, [](cplx) { return cplx{}; }));
    CHECK(s.psi1.max_abs() == 0.0);
    CHECK(testing::max_error(s.psi2, [](cplx) { return cplx(1.0); }) == 0.0);
  }

  TEST_CASE("D commutes with sigma for real potentials") {
    const Grid2D g = make_grid({-6, 6, 0, 2}, {61, 11}, {false, true});
    const auto U = soliton_potential(g, 1);
    const auto psi = random_spinor(g, 5);
    CHECK(max_diff(apply_D(U, sigma(psi)), sigma(apply_D(U, psi))) < 1e-12);
  }

  TEST_CASE("sigma maps the soliton kernel to itself") {
    const Grid2D g = make_grid({-6, 6, 0, 1}, {241, 5}, {false, true});
    const auto U = soliton_potential(g, 1);
    const double base = residual_norm(apply_D(U, soliton_spinor(g, 1)), 2);
    CHECK(residual_norm(apply_D(U, sigma(soliton_spinor(g, 1))), 2) <= 1.0001 * base + 1e-14);
  }
}

TEST_SUITE("quaternionize") {
  const Grid2D g = make_box(1.0, 7, false);

  TEST_CASE("basis spinors") {
    const QuatField e1 = quaternionize(sample_pair(g, [](cplx) { return cplx(1.0); }, [](cplx) { return cplx{}; }));
    const QuatField e2 = quaternionize(sample_pair(g, [](cplx) { return cplx{}; }, [](cplx) { return cplx(1.0); }));
    CHECK(e1.at(3) == Mat2::identity());
    CHECK(e2.at(3) == Mat2{0.0, -1.0, 1.0, 0.0});
  }

  TEST_CASE("determinant is the spinor density") {
    const auto psi = random_spinor(g, 6);
    const QuatField q = quaternionize(psi);
    for (std::size_t i = 0; i < g.size(); ++i)
      CHECK(std::abs(q.at(i).det() - (std::norm(psi.psi1[i]) + std::norm(psi.psi2[i]))) < 1e-12);
  }

  TEST_CASE("field product matches the matrix product") {
    const QuatField x = quaternionize(random_spinor(g, 7)), y = quaternionize(random_spinor(g, 8));
    const QuatField p = x * y;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Mat2 m = x.at(i) * y.at(i);
      CHECK((m - p.at(i)).max_abs() < 1e-12);
      CHECK(m.quaternion_defect() < 1e-12);
    }
  }

  TEST_CASE("first column inverts quaternionize") {
    const auto psi = random_spinor(g, 9);
    CHECK(max_diff(first_column(quaternionize(psi)), psi) == 0.0);
  }
}

TEST_SUITE("gauge_transform") {
  const Grid2D g = make_grid({-3, 3, 0, 2}, {61, 21}, {false, true});

  TEST_CASE("zero gauge is the identity") {
    const auto psi = random_spinor(g, 10), phi = random_spinor(g, 11);
    const auto U = soliton_potential(g, 1);
    const GaugeResult r = gauge_transform(psi, phi, U, ComplexField(g));
    CHECK(max_diff(r.psi, psi) == 0.0);
    CHECK(max_diff(r.phi, phi) == 0.0);
    CHECK((r.U - U).max_abs() == 0.0);
  }

  TEST_CASE("products entering the R4 differentials are invariant") {
    const Grid2D g = make_box(2.0, 41, false);
    const auto psi = random_spinor(g, 12), phi = random_spinor(g, 13);
    const auto h = ComplexField::sample(g, [](cplx w) { return 0.3 * w * w - kI * w; });
    const GaugeResult r = gauge_transform(psi, phi, ComplexField(g), h);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const cplx p1 = psi.psi1[i], p2 = psi.psi2[i], f1 = phi.psi1[i], f2 = phi.psi2[i];
      const cplx q1 = r.psi.psi1[i], q2 = r.psi.psi2[i], g1 = r.phi.psi1[i], g2 = r.phi.psi2[i];
      const double s = 1e-12 * (1.0 + std::abs(p1) + std::abs(p2)) * (1.0 + std::abs(f1) + std::abs(f2));
      REQUIRE(std::abs(std::conj(g2) * std::conj(q2) - std::conj(f2) * std::conj(p2)) < s);
      REQUIRE(std::abs(g1 * q1 - f1 * p1) < s);
      REQUIRE(std::abs(std::conj(g2) * q1 - std::conj(f2) * p1) < s);
      REQUIRE(std::abs(g1 * std::conj(q2) - f1 * std::conj(p2)) < s);
    }
  }

  TEST_CASE("constant phase keeps |U| and the surface") {
    const Grid2D gs = make_grid({-4, 4, 0, 2}, {161, 41}, {false, true});
    const auto U = soliton_potential(gs, 1);
    const auto psi = soliton_spinor(gs, 1);
    const GaugeResult r = gauge_transform(psi, psi, U, ComplexField(gs, kI * 0.7));
    CHECK((r.U.abs2() - U.abs2()).max_abs() < 1e-14);
    const SurfaceMap a = integrate_surface_r4(psi, psi), b = integrate_surface_r4(r.psi, r.phi);
    double worst = 0.0;
    for (std::size_t i = 0; i < gs.size(); ++i)
      for (int k = 0; k < 4; ++k) worst = std::max(worst, std::abs(a.point(i)[k] - b.point(i)[k]));
    CHECK(worst < 1e-12);
  }

  TEST_CASE("holomorphic gauge preserves the kernel at scheme order") {
    auto res = [](int n) {
      const Grid2D gr = make_grid({-3, 3, -0.5, 0.5}, {n, n / 6 + 1});
      const auto U = soliton_potential(gr, 1);
      const auto psi = soliton_spinor(gr, 1);
      const GaugeResult r = gauge_transform(psi, psi, U, ComplexField::sample(gr, [](cplx w) { return w; }));
      return residual_norm(apply_D(r.U, r.psi), 2);
    };
    const double a = res(121), b = res(241);
    CHECK(a < 1e-2);
    CHECK(testing::order(a, b) > 1.8);
  }

  TEST_CASE("non-holomorphic gauge is rejected") {
    const auto psi = random_spinor(g, 14);
    const auto h = ComplexField::sample(g, [](cplx w) { return std::conj(w); });
    CHECK_THROWS_AS(gauge_transform(psi, psi, ComplexField(g), h), NotHolomorphicError);
  }
}

TEST_SUITE("spinor io") {
  TEST_CASE("csv round trip") {
    const auto psi = random_spinor(make_grid({0, 1, 0, 2}, {5, 6}), 15);
    const auto path = std::filesystem::temp_directory_path() / "spinsurf_spinor_roundtrip.csv";
    write_spinor_csv(path, psi);
    CHECK(max_diff(read_spinor_csv(path), psi) < 1e-14);
    std::filesystem::remove(path);
  }
}
