#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "doctest.h"
#include "sampling.hpp"
#include "spinsurf/bipoly.hpp"
#include "spinsurf/derivative.hpp"
#include "spinsurf/dsii.hpp"
#include "spinsurf/error.hpp"
#include "spinsurf/field_io.hpp"
#include "spinsurf/grid.hpp"
#include "spinsurf/parallel.hpp"
#include "spinsurf/quadrature.hpp"
#include "spinsurf/rational.hpp"

using namespace spinsurf;
using spinsurf::testing::max_error;
using spinsurf::testing::order;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

BiPoly z() { return BiPoly::var(Var::z); }
BiPoly zb() { return BiPoly::var(Var::zbar); }
BiPoly t() { return BiPoly::var(Var::t); }
BiPoly c() { return BiPoly::var(Var::c); }

}  // namespace

TEST_SUITE("grid") {
  TEST_CASE("corner node of a closed box") {
    const Grid2D g = make_grid({-1, 1, -1, 1}, {5, 5});
    CHECK(g.z(0, 0) == cplx(-1, -1));
    CHECK(g.z(4, 4) == cplx(1, 1));
    CHECK(g.hx() == doctest::Approx(0.5));
  }

  TEST_CASE("periodic spacing excludes the right edge") {
    const Grid2D g = make_grid({0, 2 * kPi, 0, 2 * kPi}, {64, 64}, {true, true});
    CHECK(g.hx() == doctest::Approx(2 * kPi / 64));
    CHECK(g.fully_periodic());
  }

  TEST_CASE("node count") { CHECK(make_box(30, 512, false).size() == 262144u); }

  TEST_CASE("degenerate configurations are rejected") {
    CHECK_THROWS_AS(make_grid({1, 1, 0, 1}, {8, 8}), ConfigError);
    CHECK_THROWS_AS(make_grid({0, 1, 0, 1}, {3, 8}), ConfigError);
  }

  TEST_CASE("index round trip") {
    const Grid2D g = make_grid({0, 3, 0, 2}, {7, 5});
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(g.index(g.ix_of(i), g.iy_of(i)) == i);
  }
}

TEST_SUITE("wirtinger_derivative") {
  TEST_CASE("z squared is differentiated exactly by central differences") {
    const Grid2D g = make_grid({-1, 2, -1, 1}, {9, 7});
    const auto f = ComplexField::sample(g, [](cplx w) { return w * w; });
    CHECK(max_error(wirtinger_derivative(f, Direction::z), [](cplx w) { return 2.0 * w; }) < 1e-12);
    CHECK(max_error(wirtinger_derivative(f, Direction::zbar), [](cplx) { return cplx{}; }) < 1e-12);
  }

  TEST_CASE("holomorphic data is annihilated by dbar") {
    const Grid2D g = make_grid({-1, 1, -1, 1}, {8, 8});
    const auto f = ComplexField::sample(g, [](cplx w) { return w; });
    CHECK(wirtinger_derivative(f, Direction::zbar).max_abs() < 1e-13);
  }

  TEST_CASE("spectral derivative of a plane wave") {
    const Grid2D g = make_grid({0, 2 * kPi, 0, 2 * kPi}, {32, 16}, {true, true});
    const auto f = ComplexField::sample(g, [](cplx w) { return std::exp(kI * w.real()); });
    const auto d = wirtinger_derivative(f, Direction::z, Scheme::spectral);
    CHECK(max_error(d, [](cplx w) { return 0.5 * kI * std::exp(kI * w.real()); }) < 1e-13);
  }

  TEST_CASE("spectral scheme needs a periodic grid") {
    const auto f = ComplexField(make_grid({0, 1, 0, 1}, {8, 8}));
    CHECK_THROWS_AS(wirtinger_derivative(f, Direction::z, Scheme::spectral), SchemeError);
  }

  TEST_CASE("central2 converges at second order on exp(z)") {
    auto err = [](int n) {
      const Grid2D g = make_grid({-1, 1, -1, 1}, {n, n});
      const auto f = ComplexField::sample(g, [](cplx w) { return std::exp(w); });
      return max_error(wirtinger_derivative(f, Direction::z), [](cplx w) { return std::exp(w); });
    };
    const double e1 = err(33), e2 = err(65);
    CHECK(e1 / e2 >= 3.5);
  }

  TEST_CASE("spectral second derivatives match the symbols") {
    const Grid2D g = make_grid({0, 2 * kPi, 0, 2 * kPi}, {32, 32}, {true, true});
    const auto f = ComplexField::sample(g, [](cplx w) { return std::exp(kI * (2.0 * w.real() + w.imag())); });
    // ∂ e^{i(ax+by)} = (ia + b)/2 · e, ∂̄ = (ia - b)/2 · e
    const cplx dz = (2.0 * kI + 1.0) / 2.0, dzb = (2.0 * kI - 1.0) / 2.0;
    auto e = [](cplx w) { return std::exp(kI * (2.0 * w.real() + w.imag())); };
    CHECK(max_error(wirtinger_second(f, Direction::z, Direction::z, Scheme::spectral),
                    [&](cplx w) { return dz * dz * e(w); }) < 1e-11);
    CHECK(max_error(wirtinger_second(f, Direction::z, Direction::zbar, Scheme::spectral),
                    [&](cplx w) { return dz * dzb * e(w); }) < 1e-11);
    CHECK(max_error(wirtinger_second(f, Direction::zbar, Direction::zbar, Scheme::spectral),
                    [&](cplx w) { return dzb * dzb * e(w); }) < 1e-11);
  }
}

TEST_SUITE("integrate2d") {
  TEST_CASE("constant on the unit square") {
    CHECK(integrate2d(ComplexField(make_grid({0, 1, 0, 1}, {11, 11}), 1.0)).real() == doctest::Approx(1.0));
  }

  TEST_CASE("sech squared strip") {
    const Grid2D g = make_grid({-20, 20, 0, 2 * kPi}, {2001, 64}, {false, true});
    const auto f = ComplexField::sample(g, [](cplx w) { return 0.25 / std::pow(std::cosh(w.real()), 2); });
    const double exact = 0.25 * 2.0 * std::tanh(20.0) * 2.0 * kPi;
    CHECK(std::abs(integrate2d(f).real() - exact) < 1e-8);
  }

  TEST_CASE("s1 density has norm 2 pi on a radius-30 box") {
    const auto sol = catalog("s1", cplx(1.0));
    const auto U = ComplexField::sample(make_box(30, 601, false), sol.U_sampler(1.0));
    CHECK(std::abs(integrate2d(U.abs2()).real() - 2 * kPi) < 0.01 * 2 * kPi);
  }

  TEST_CASE("masked nodes need an explicit policy") {
    ComplexField f(make_grid({0, 1, 0, 1}, {5, 5}), 1.0);
    f.flag_singular(12);
    CHECK_THROWS_AS(integrate2d(f), MaskError);
    CHECK(integrate2d(f, MaskPolicy::skip).real() < 1.0);
  }

  TEST_CASE("nonnegative integrand gives a nonnegative value") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ComplexField f(make_grid({0, 1, 0, 1}, {17, 13}));
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = u(rng);
    CHECK(integrate2d(f).real() >= 0.0);
  }

  TEST_CASE("sum is identical for any thread count") {
    ComplexField f = ComplexField::sample(make_box(3, 257, false), [](cplx w) { return std::sin(w) / (1.0 + std::norm(w)); });
    set_thread_count(1);
    const cplx a = integrate2d(f);
    const auto da = wirtinger_derivative(f, Direction::z);
    set_thread_count(4);
    const cplx b = integrate2d(f);
    const auto db = wirtinger_derivative(f, Direction::z);
    set_thread_count(1);
    CHECK(a == b);
    for (std::size_t i = 0; i < f.size(); ++i) REQUIRE(da[i] == db[i]);
  }
}

TEST_SUITE("path_integrate") {
  const Grid2D g = make_grid({0, 1, 0, 1}, {11, 11});

  TEST_CASE("dz along the real segment") {
    const Form1 form{ComplexField(g, 1.0), ComplexField(g, 0.0)};
    const auto path = l_path({0, 0}, {10, 0}, PathOrder::x_first);
    CHECK(std::abs(path_integrate(form, path) - 1.0) < 1e-14);
  }

  TEST_CASE("dzbar along the imaginary segment") {
    const Form1 form{ComplexField(g, 0.0), ComplexField(g, 1.0)};
    const auto path = l_path({0, 0}, {0, 10}, PathOrder::y_first);
    CHECK(std::abs(path_integrate(form, path) - (-kI)) < 1e-14);
  }

  TEST_CASE("closed form around a rectangle") {
    auto p = ComplexField::sample(g, [](cplx w) { return w + std::conj(w); });
    const Form1 form{p, p};
    CHECK(std::abs(path_integrate(form, rectangle_loop({1, 2}, {8, 9}))) < 1e-12);
  }

  TEST_CASE("closed non-polynomial form is O(h^2) on a loop") {
    auto loop_value = [](int n) {
      const Grid2D gr = make_grid({0, 1, 0, 1}, {n, n});
      // d(e^{z} z̄) = z̄ e^z dz + e^z dz̄
      const Form1 form{ComplexField::sample(gr, [](cplx w) { return std::conj(w) * std::exp(w); }),
                       ComplexField::sample(gr, [](cplx w) { return std::exp(w); })};
      return std::abs(path_integrate(form, rectangle_loop({0, 0}, {n - 1, n - 1})));
    };
    const double a = loop_value(17), b = loop_value(33);
    CHECK(a < 0.05);
    CHECK(b <= a);
  }

  TEST_CASE("non-adjacent nodes raise a path error") {
    const Form1 form{ComplexField(g, 1.0), ComplexField(g, 0.0)};
    const std::vector<NodeIndex> path{{0, 0}, {2, 0}};
    CHECK_THROWS_AS(path_integrate(form, path), PathError);
  }

  TEST_CASE("primitive agrees with explicit paths") {
    const Form1 form{ComplexField::sample(g, [](cplx w) { return w * w; }), ComplexField(g, 0.0)};
    const auto F = primitive(form, {0, 0}, PathOrder::x_first);
    const auto path = l_path({0, 0}, {7, 4}, PathOrder::x_first);
    CHECK(std::abs(F(7, 4) - path_integrate(form, path)) < 1e-13);
  }
}

TEST_SUITE("bipoly") {
  TEST_CASE("formal z derivative") { CHECK((z() * z() * zb()).derivative(Var::z) == 2.0 * z() * zb()); }

  TEST_CASE("evaluation of the s1 datum") {
    const BiPoly f = z() * z() + 2.0 * kI * t() + c();
    CHECK(std::abs(f.eval(0.0, 1.0, 0.0) - 2.0 * kI) < 1e-15);
  }

  TEST_CASE("t derivative of a t-free product vanishes") { CHECK((z() * zb()).derivative(Var::t).is_zero()); }

  TEST_CASE("conjugation swaps z and zbar") {
    const BiPoly p = kI * z() * z() + 3.0 * zb() + c();
    CHECK(p.conj() == -kI * zb() * zb() + 3.0 * z() + BiPoly::var(Var::cbar));
  }

  TEST_CASE("heat extension of the catalog data") {
    CHECK(heat_extend(z() * z() + c()) == z() * z() + 2.0 * kI * t() + c());
    CHECK(heat_extend(z().pow(4) + c()) == z().pow(4) + 12.0 * kI * t() * z() * z() - 12.0 * t() * t() + c());
    CHECK(heat_extend(z()) == z());
    CHECK_THROWS_AS(heat_extend(zb()), DomainError);
  }

  TEST_CASE("heat extension of random polynomials solves the heat equation") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> coef(-9, 9);
    for (int trial = 0; trial < 20; ++trial) {
      BiPoly p;
      for (int k = 0; k <= 9; ++k) p += BiPoly::monomial(cplx(coef(rng), coef(rng)), k);
      const BiPoly f = heat_extend(p);
      CHECK(heat_residual(f).is_zero());
      CHECK(f.bind(Var::t, 0.0) == p);
    }
  }

  TEST_CASE("potential of a closed form") {
    const BiPoly F = z() * z() * zb() + kI * t() * zb();
    const BiPoly P = poly_potential(F.derivative(Var::z), F.derivative(Var::zbar), F.derivative(Var::t));
    CHECK(P == F);
    CHECK_THROWS_AS(poly_potential(zb(), BiPoly(0.0)), NotClosedError);
  }

  TEST_CASE("json round trip") {
    const BiPoly f = heat_extend(z().pow(4) + c());
    CHECK(bipoly_from_json(bipoly_to_json(f)) == f);
    const BiPoly g = z() * zb() - 2.5 * kI * t();
    CHECK(bipoly_from_json(bipoly_to_json(g)) == g);
  }
}

TEST_SUITE("rational") {
  TEST_CASE("derivative of 1/z") {
    const RationalFn r(BiPoly(1.0), z());
    CHECK(identical(r.derivative(Var::z), RationalFn(BiPoly(-1.0), z(), 2)));
  }

  TEST_CASE("zbar derivative of |z|^2") { CHECK(identical(RationalFn(z() * zb()).derivative(Var::zbar), RationalFn(z()))); }

  TEST_CASE("2i a_z of s1 reproduces the displayed V") {
    const auto sol = catalog("s1");
    CHECK(identical(2.0 * kI * sol.a.derivative(Var::z), s1_displayed_V()));
  }

  TEST_CASE("quotient rule agrees with a finite difference") {
    const RationalFn r(z() * z() + kI * zb(), BiPoly(1.0) + z() * zb(), 2);
    const cplx w{0.3, -0.7};
    const double h = 1e-5;
    auto val = [&](cplx p) { return r.eval(p, 0.0); };
    // ∂ = (∂x - i∂y)/2
    const cplx fd = 0.5 * ((val(w + h) - val(w - h)) / (2 * h) - kI * (val(w + kI * h) - val(w - kI * h)) / (2 * h));
    CHECK(std::abs(r.derivative(Var::z).eval(w, 0.0) - fd) < 1e-8);
  }
}

TEST_SUITE("field io") {
  TEST_CASE("csv round trip keeps values, grid and mask") {
    const Grid2D g = make_grid({-1, 2, 0, 1}, {6, 5}, {false, true});
    ComplexField f = ComplexField::sample(g, [](cplx w) { return w * w + kI; });
    f.flag_singular(7);
    const auto path = std::filesystem::temp_directory_path() / "spinsurf_field_roundtrip.csv";
    write_field_csv(path, f);
    const ComplexField r = read_field_csv(path);
    CHECK(r.grid() == g);
    CHECK(r.is_singular(7));
    for (std::size_t i = 0; i < f.size(); ++i)
      if (i != 7) CHECK(std::abs(r[i] - f[i]) < 1e-14);
    std::filesystem::remove(path);
  }
}
