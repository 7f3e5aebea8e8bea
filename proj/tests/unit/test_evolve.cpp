#include <cmath>
#include <numbers>

#include "doctest.h"
#include "sampling.hpp"
#include "spinsurf/dsii.hpp"
#include "spinsurf/error.hpp"
#include "spinsurf/evolve.hpp"
#include "spinsurf/grid.hpp"
#include "spinsurf/quadrature.hpp"

using namespace spinsurf;
using spinsurf::testing::order;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

double rel_l2(const ComplexField& a, const ComplexField& b) { return std::sqrt(l2_norm_sq(a - b) / l2_norm_sq(b)); }

// Closed-form transformed spinors of the heat-polynomial datum:
// ψ̃ = (-f̄, -iz)/Δ solves ψ_t = Aψ and φ̃ = (f - zf', -i(f̄'f + z))/Δ solves
// φ_t = A∨φ for the potential of that datum.
SpinorField psi_tilde(const ExactSolution& sol, const Grid2D& g, double t, cplx c) {
  const BiPoly f = sol.f.bind_parameter(c);
  return {ComplexField::sample(g, [&](cplx w) { const cplx fv = f.eval(w, t); return -std::conj(fv) / (std::norm(w) + std::norm(fv)); }),
          ComplexField::sample(g, [&](cplx w) { const cplx fv = f.eval(w, t); return -kI * w / (std::norm(w) + std::norm(fv)); })};
}

SpinorField phi_tilde(const ExactSolution& sol, const Grid2D& g, double t, cplx c) {
  const BiPoly f = sol.f.bind_parameter(c), fz = f.derivative(Var::z);
  return {ComplexField::sample(g, [&](cplx w) {
            const cplx fv = f.eval(w, t);
            return (fv - w * fz.eval(w, t)) / (std::norm(w) + std::norm(fv));
          }),
          ComplexField::sample(g, [&](cplx w) {
            const cplx fv = f.eval(w, t);
            return -kI * (std::conj(fz.eval(w, t)) * fv + w) / (std::norm(w) + std::norm(fv));
          })};
}

}  // namespace

TEST_SUITE("dsii_step") {
  TEST_CASE("zero stays zero") {
    const Trajectory tr = evolve(ComplexField(make_box(4.0, 32, true)), 0.0, 0.5, 0.01);
    CHECK(tr.final_state.U.max_abs() == 0.0);
    CHECK(tr.final_state.t == doctest::Approx(0.5));
  }

  TEST_CASE("linear plane wave dispersion") {
    const Grid2D g = make_grid({0, 2 * kPi, 0, 2 * kPi}, {32, 32}, {true, true});
    const int k = 3, l = 2;
    auto wave = [&](double time) {
      return ComplexField::sample(g, [&](cplx w) {
        return std::exp(kI * (k * w.real() + l * w.imag())) * std::polar(1.0, -0.5 * (k * k - l * l) * time);
      });
    };
    EvolveOptions opts;
    opts.step.linear_only = true;
    const Trajectory tr = evolve(wave(0.0), 0.0, 0.7, 0.05, opts);
    CHECK((tr.final_state.U - wave(0.7)).max_abs() < 1e-12);
    for (std::size_t i = 0; i < g.size(); ++i) REQUIRE(std::abs(std::abs(tr.final_state.U[i]) - 1.0) < 1e-12);
  }

  TEST_CASE("linear substep conserves the norm") {
    const Grid2D g = make_box(5.0, 64, true);
    const auto U = ComplexField::sample(g, [](cplx w) { return std::exp(-std::norm(w - 1.0)) * (1.0 + kI * w); });
    EvolveOptions opts;
    opts.step.linear_only = true;
    CHECK(std::abs(evolve(U, 0.0, 1.0, 0.01, opts).final_state.drift()) < 1e-13);
  }

  TEST_CASE("periodic grid and positive dt are required") {
    CHECK_THROWS_AS(make_state(ComplexField(make_box(1.0, 9, false)), 0.0, 0.1), SchemeError);
    CHECK_THROWS_AS(make_state(ComplexField(make_box(1.0, 8, true)), 0.0, 0.0), ConfigError);
  }

  TEST_CASE("time step bound") {
    EvolverState s = make_state(ComplexField(make_box(1.0, 16, true)), 0.0, 1.0);
    StepOptions opts;
    opts.kappa = 0.5;
    CHECK_THROWS_AS(dsii_step(s, opts), ConfigError);
  }

  TEST_CASE("non-finite values abort and keep the last good state") {
    EvolverState s = make_state(ComplexField(make_box(1.0, 16, true), 1.0), 0.0, 0.1);
    dsii_step(s);
    s.U[5] = cplx(std::nan(""), 0.0);
    const ComplexField before = s.U;
    CHECK_THROWS_AS(dsii_step(s), NumericalError);
    CHECK(s.t == doctest::Approx(0.1));
    CHECK(s.steps == 1u);
    CHECK(std::isnan(s.U[5].real()));
    CHECK(s.U[6] == before[6]);
  }
}

TEST_SUITE("evolve") {
  const ExactSolution sol = catalog("s1", cplx(1.0));

  TEST_CASE("norm drift over 1000 steps") {
    const Grid2D g = make_box(30.0, 128, true);
    const Trajectory tr = evolve(ComplexField::sample(g, sol.U_sampler(0.0)), 0.0, 0.5, 5e-4);
    CHECK(tr.final_state.steps == 1000u);
    CHECK(std::abs(tr.final_state.drift()) <= 1e-3);
    CHECK(tr.final_state.history.size() == 1001u);
  }

  TEST_CASE("Strang splitting is second order in time") {
    const Grid2D g = make_box(30.0, 128, true);
    const ComplexField U0 = ComplexField::sample(g, sol.U_sampler(0.0));
    const double T = 0.2;
    const ComplexField ref = evolve(U0, 0.0, T, 1.25e-3).final_state.U;
    const double e1 = rel_l2(evolve(U0, 0.0, T, 2e-2).final_state.U, ref);
    const double e2 = rel_l2(evolve(U0, 0.0, T, 1e-2).final_state.U, ref);
    MESSAGE("dt errors " << e1 << " " << e2);
    CHECK(e1 / e2 >= 3.5);
  }

  TEST_CASE("short run tracks the exact solution") {
    const Grid2D g = make_box(30.0, 256, true);
    const Trajectory tr = evolve(ComplexField::sample(g, sol.U_sampler(0.0)), 0.0, 0.05, 1e-3);
    CHECK(rel_l2(tr.final_state.U, ComplexField::sample(g, sol.U_sampler(0.05))) < 1e-2);
  }

  TEST_CASE("snapshots and early stop") {
    const Grid2D g = make_box(4.0, 16, true);
    EvolveOptions opts;
    opts.snapshot_every = 2;
    int calls = 0;
    opts.on_step = [&](const EvolverState&) { return ++calls < 5; };
    const Trajectory tr = evolve(ComplexField(g, 0.1), 0.0, 1.0, 0.1, opts);
    CHECK(tr.stopped_early);
    CHECK(tr.final_state.steps == 5u);
    CHECK(tr.snapshots.size() == 3u);
  }

  TEST_CASE("last step lands on t_end") {
    const Trajectory tr = evolve(ComplexField(make_box(4.0, 16, true), 0.1), 0.0, 0.25, 0.1);
    CHECK(tr.final_state.t == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(tr.final_state.steps == 3u);
  }
}

TEST_SUITE("spinor_evolution_residual") {
  TEST_CASE("constant spinor on the trivial background") {
    const Grid2D g = make_box(1.0, 9, false);
    const SpinorField s{ComplexField(g, 1.0), ComplexField(g, kI)};
    const ComplexField Z(g);
    CHECK(spinor_evolution_residual({&s, &s, &s}, Z, Z, 0.1, LinearProblem::A) == 0.0);
    CHECK(spinor_evolution_residual({&s, &s, &s}, Z, Z, 0.1, LinearProblem::Avee) == 0.0);
  }

  TEST_CASE("plane wave dispersion of the first component") {
    const Grid2D g = make_grid({0, 2 * kPi, 0, 2 * kPi}, {32, 8}, {true, true});
    const double k = 3.0, dt = 1e-4;
    // ψ1_t = -i∂²ψ1 and ∂² e^{ikx} = -(k²/4) e^{ikx}
    auto slice = [&](double time) {
      return SpinorField{ComplexField::sample(g, [&](cplx w) { return std::exp(kI * (k * w.real() + k * k * time / 4)); }),
                         ComplexField(g)};
    };
    const SpinorField a = slice(-dt), b = slice(0), c = slice(dt);
    const ComplexField Z(g);
    CHECK(spinor_evolution_residual({&a, &b, &c}, Z, Z, dt, LinearProblem::A, Scheme::spectral) < 1e-6);
    CHECK(spinor_evolution_residual({&a, &b, &c}, Z, Z, dt, LinearProblem::Avee, Scheme::spectral) > 1.0);
  }

  TEST_CASE("transformed spinors of the s1 datum") {
    const ExactSolution sol = catalog("s1", cplx(1.0));
    auto res = [&](int n, LinearProblem p, bool psi) {
      const Grid2D g = make_box(2.0, n, false);
      const double t = 0.3, dt = 1e-3;
      std::array<SpinorField, 3> s;
      for (int j = 0; j < 3; ++j)
        s[j] = psi ? psi_tilde(sol, g, t + (j - 1) * dt, 1.0) : phi_tilde(sol, g, t + (j - 1) * dt, 1.0);
      const auto U = ComplexField::sample(g, sol.U_sampler(t)), V = ComplexField::sample(g, sol.V_sampler(t));
      return spinor_evolution_residual({&s[0], &s[1], &s[2]}, U, V, dt, p);
    };
    for (LinearProblem p : {LinearProblem::A, LinearProblem::Avee}) {
      const bool psi = p == LinearProblem::A;
      const double a = res(81, p, psi), b = res(161, p, psi);
      CHECK(b < 0.1);
      CHECK(order(a, b) > 1.8);
    }
    CHECK(res(161, LinearProblem::Avee, true) > 0.1);
    CHECK(res(161, LinearProblem::A, false) > 0.1);
  }
}
