#include "spinsurf/evolve.hpp"

#include <algorithm>
#include <cmath>

#include "spinsurf/dsii.hpp"
#include "spinsurf/error.hpp"
#include "spinsurf/fft.hpp"
#include "spinsurf/parallel.hpp"
#include "spinsurf/quadrature.hpp"

namespace spinsurf {
namespace {

constexpr cplx kI{0.0, 1.0};

double norm2(const ComplexField& U) { return integrate2d(U.abs2()).real(); }

void record(EvolverState& s, std::size_t capacity) {
  s.history.push_back({s.t, norm2(s.U)});
  while (s.history.size() > capacity) s.history.pop_front();
}

void linear_half_step(const Fft2D& fft, ComplexField& U, double tau) {
  std::vector<cplx> spec(U.size());
  fft.forward(U.values(), spec);
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const Wavenumber k = fft.wavenumber(i);
    spec[i] *= std::polar(1.0, -0.5 * (k.kx_full * k.kx_full - k.ky_full * k.ky_full) * tau);
  }
  fft.inverse(spec, U.values());
}

}  // namespace

double EvolverState::drift() const {
  if (initial_norm2 == 0.0) return 0.0;
  return (norm2(U) - initial_norm2) / initial_norm2;
}

EvolverState make_state(ComplexField U0, double t0, double dt) {
  if (!U0.grid().fully_periodic()) throw SchemeError("evolver: grid must be periodic in both axes");
  if (!(dt > 0.0)) throw ConfigError("evolver: dt must be positive");
  if (!U0.all_finite() || U0.has_singular()) throw NumericalError("evolver: initial field is not finite");
  EvolverState s;
  s.U = std::move(U0);
  s.t = t0;
  s.dt = dt;
  s.initial_norm2 = norm2(s.U);
  s.history.push_back({t0, s.initial_norm2});
  return s;
}

void dsii_step(EvolverState& state, const StepOptions& opts) {
  const Grid2D& g = state.U.grid();
  if (opts.kappa > 0.0) {
    const double h = std::min(g.hx(), g.hy());
    if (state.dt > opts.kappa * h * h) throw ConfigError("dsii_step: dt exceeds kappa·h²");
  }
  const Fft2D& fft = fft_for(g);
  ComplexField U = state.U;
  linear_half_step(fft, U, 0.5 * state.dt);
  if (!opts.linear_only) {
    const ComplexField V = v_from_u(U);
    const double dt = state.dt;
    parallel_for(U.size(), [&](std::size_t i) { U[i] *= std::polar(1.0, 2.0 * V[i].real() * dt); });
  }
  linear_half_step(fft, U, 0.5 * state.dt);
  if (!U.all_finite()) throw NumericalError("dsii_step: non-finite values; state kept at t = " + std::to_string(state.t));
  state.U = std::move(U);
  state.t += state.dt;
  ++state.steps;
  if (opts.record_every > 0 && state.steps % opts.record_every == 0) record(state, opts.history_capacity);
}

Trajectory evolve(ComplexField U0, double t0, double t_end, double dt, const EvolveOptions& opts) {
  Trajectory tr{make_state(std::move(U0), t0, dt), {}, false};
  EvolverState& s = tr.final_state;
  if (opts.snapshot_every > 0) tr.snapshots.push_back({s.t, s.U});
  const double nominal = dt;
  while (s.t < t_end - 1e-12 * std::max(1.0, std::abs(t_end))) {
    s.dt = std::min(nominal, t_end - s.t);
    dsii_step(s, opts.step);
    if (opts.snapshot_every > 0 && s.steps % opts.snapshot_every == 0) tr.snapshots.push_back({s.t, s.U});
    if (opts.on_step && !opts.on_step(s)) {
      tr.stopped_early = true;
      break;
    }
  }
  s.dt = nominal;
  return tr;
}

double spinor_evolution_residual(const std::array<const SpinorField*, 3>& psi, const ComplexField& U,
                                 const ComplexField& V, double dt, LinearProblem problem, Scheme scheme,
                                 int margin) {
  const SpinorField& p = *psi[1];
  for (const SpinorField* s : psi) {
    require_same_grid(s->psi1, p.psi1, "spinor_evolution_residual");
    require_same_grid(s->psi2, p.psi1, "spinor_evolution_residual");
  }
  require_same_grid(U, p.psi1, "spinor_evolution_residual");
  require_same_grid(V, p.psi1, "spinor_evolution_residual");
  if (!(dt > 0.0)) throw ConfigError("spinor_evolution_residual: dt must be positive");
  const ComplexField d2_1 = wirtinger_second(p.psi1, Direction::z, Direction::z, scheme);
  const ComplexField db2_2 = wirtinger_second(p.psi2, Direction::zbar, Direction::zbar, scheme);
  const ComplexField d_1 = wirtinger_derivative(p.psi1, Direction::z, scheme);
  const ComplexField db_2 = wirtinger_derivative(p.psi2, Direction::zbar, scheme);
  const ComplexField Uz = wirtinger_derivative(U, Direction::z, scheme);
  const ComplexField Uzb = wirtinger_derivative(U, Direction::zbar, scheme);
  const bool avee = problem == LinearProblem::Avee;
  ComplexField r1(U.grid()), r2(U.grid());
  parallel_for(U.size(), [&](std::size_t i) {
    const cplx u = U[i], ub = std::conj(u), v = V[i];
    // A∨ has the same shape as A with U and Ū exchanged off the diagonal and
    // an overall -i instead of i; note conj(U_z) = Ū_z̄ and conj(U_z̄) = Ū_z.
    const cplx off1 = avee ? u * db_2[i] - Uzb[i] * p.psi2[i] : ub * db_2[i] - std::conj(Uz[i]) * p.psi2[i];
    const cplx off2 = avee ? ub * d_1[i] - std::conj(Uzb[i]) * p.psi1[i] : u * d_1[i] - Uz[i] * p.psi1[i];
    const cplx pre = avee ? -kI : kI;
    const cplx a1 = pre * (-d2_1[i] - v * p.psi1[i] + off1);
    const cplx a2 = pre * (off2 + db2_2[i] + std::conj(v) * p.psi2[i]);
    r1[i] = (psi[2]->psi1[i] - psi[0]->psi1[i]) / (2.0 * dt) - a1;
    r2[i] = (psi[2]->psi2[i] - psi[0]->psi2[i]) / (2.0 * dt) - a2;
  });
  for (const ComplexField* f : {&d2_1, &db2_2, &d_1, &db_2, &Uz, &Uzb, &V}) {
    r1.merge_mask(*f);
    r2.merge_mask(*f);
  }
  return std::max(r1.max_abs_interior(margin), r2.max_abs_interior(margin));
}

}  // namespace spinsurf
