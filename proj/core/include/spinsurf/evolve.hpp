#pragma once

#include <deque>
#include <functional>
#include <optional>
#include <vector>

#include "spinsurf/derivative.hpp"
#include "spinsurf/spinor.hpp"

namespace spinsurf {

struct NormSample {
  double t = 0.0;
  double norm2 = 0.0;
};

/// U(t) on a fully periodic grid with its norm history.
struct EvolverState {
  ComplexField U;
  double t = 0.0;
  double dt = 0.0;
  double initial_norm2 = 0.0;
  std::deque<NormSample> history;
  std::size_t steps = 0;

  /// Relative change of ‖U‖² since the initial state.
  double drift() const;
};

struct StepOptions {
  /// When positive, dt must not exceed kappa·min(hx, hy)². The splitting is
  /// unconditionally stable, so the bound is off by default.
  double kappa = 0.0;
  /// Skip the nonlinear substep (V = 0).
  bool linear_only = false;
  std::size_t history_capacity = 4096;
  /// Record a norm sample every this many steps.
  std::size_t record_every = 1;
};

/// Initial state; throws SchemeError unless the grid is fully periodic and
/// ConfigError unless dt > 0.
EvolverState make_state(ComplexField U0, double t0, double dt);

/// One Strang step: exact Fourier half-step of U_t = (i/2)(U_xx - U_yy),
/// the pointwise step U <- U exp(2i Re V dt) with V = v_from_u(U), and a
/// second half-step. NaN/Inf raises NumericalError and leaves the state
/// untouched.
void dsii_step(EvolverState& state, const StepOptions& opts = {});

struct Snapshot {
  double t = 0.0;
  ComplexField U;
};

struct EvolveOptions {
  StepOptions step;
  /// Store a snapshot every this many steps (0 disables snapshots).
  std::size_t snapshot_every = 0;
  /// Called after every step; returning false stops the run.
  std::function<bool(const EvolverState&)> on_step;
};

struct Trajectory {
  EvolverState final_state;
  std::vector<Snapshot> snapshots;
  bool stopped_early = false;
};

/// Steps until t_end (the last step is shortened to land on it).
Trajectory evolve(ComplexField U0, double t0, double t_end, double dt, const EvolveOptions& opts = {});

/// Which linear problem a spinor should satisfy.
enum class LinearProblem {
  A,     ///< ψ_t = Aψ
  Avee,  ///< φ_t = A∨φ
};

/// max |ψ_t - Aψ| (or |φ_t - A∨φ|) at the middle of three time slices, with
/// U, V at the middle time, over nodes `margin` from non-periodic edges.
double spinor_evolution_residual(const std::array<const SpinorField*, 3>& psi, const ComplexField& U,
                                 const ComplexField& V, double dt, LinearProblem problem,
                                 Scheme scheme = Scheme::central2, int margin = 2);

}  // namespace spinsurf
