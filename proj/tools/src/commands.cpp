#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "spinsurf/cli.hpp"
#include "spinsurf/curvature.hpp"
#include "spinsurf/dsii.hpp"
#include "spinsurf/error.hpp"
#include "spinsurf/evolve.hpp"
#include "spinsurf/fft.hpp"
#include "spinsurf/field_io.hpp"
#include "spinsurf/hierarchy.hpp"
#include "spinsurf/mesh.hpp"
#include "spinsurf/moutard.hpp"
#include "spinsurf/quadrature.hpp"
#include "spinsurf/surface.hpp"

namespace spinsurf::cli {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

Grid2D resolve_grid(RunConfig& cfg, Resolution res, Bounds box, bool periodic) {
  if (!cfg.grid) cfg.grid = res;
  if (!cfg.box) cfg.box = box;
  if (!cfg.periodic) cfg.periodic = periodic;
  return make_grid(*cfg.box, *cfg.grid, {*cfg.periodic, *cfg.periodic});
}

json complex_json(cplx c) { return json::array({c.real(), c.imag()}); }

ComplexField sample_flagged(const Grid2D& g, const std::function<cplx(cplx)>& fn) {
  ComplexField f = ComplexField::sample(g, fn);
  for (std::size_t i = 0; i < g.size(); ++i)
    if (!std::isfinite(f[i].real()) || !std::isfinite(f[i].imag())) {
      f[i] = 0.0;
      f.flag_singular(i);
    }
  return f;
}

// Surface matrix S(Φ0, Ψ0) of a heat polynomial, read as points of R⁴.
SurfaceMap heat_graph(const ExactSolution& sol, cplx c, const Grid2D& g, double t) {
  const BiPoly fz = sol.f.derivative(Var::z);
  const SpinorSource psi0 = [](cplx, double) { return std::array<cplx, 2>{1.0, 0.0}; };
  const SpinorSource phi0 = [fz](cplx w, double tt) {
    return std::array<cplx, 2>{1.0, -kI * std::conj(fz.eval(w, tt))};
  };
  TimedOptions opts;
  opts.build.constant = Mat2{-c, 0.0, 0.0, -std::conj(c)};
  const NormalizedPair pair = normalize_S_pair(build_S_timed(phi0, psi0, g, t, opts), build_S_timed(psi0, phi0, g, t));
  SurfaceMap s(4, g);
  for (std::size_t i = 0; i < g.size(); ++i) s.set_point(i, quaternion_to_point(pair.S_phi_psi.S.at(i)));
  return s;
}

SpinorField named_spinor(const std::string& name, const Grid2D& g, ComplexField& U) {
  U = ComplexField(g);
  if (name == "plane") return {ComplexField(g, 1.0), ComplexField(g)};
  if (name == "enneper") return {ComplexField(g, 1.0), ComplexField::sample(g, [](cplx w) { return std::conj(w); })};
  if (name == "soliton") {
    auto theta = [](cplx w) { return -2.0 * std::atan(std::tanh(0.5 * w.real())); };
    U = ComplexField::sample(g, [](cplx w) { return cplx(0.5 / std::cosh(w.real())); });
    return {ComplexField::sample(g, [&](cplx w) { return cplx(std::cos(theta(w))); }),
            ComplexField::sample(g, [&](cplx w) { return cplx(std::sin(theta(w))); })};
  }
  throw ConfigError("unknown spinor '" + name + "' (expected plane, enneper or soliton)");
}

json curvature_stats(const SurfaceMap& s) {
  const CurvatureField H = discrete_mean_curvature(s);
  double peak = 0.0, sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < H.H.size(); ++i) {
    if (H.H.is_singular(i)) continue;
    const double v = std::abs(H.H[i].real());
    peak = std::max(peak, v);
    sum += v;
    ++count;
  }
  return {{"max_abs_H", peak}, {"mean_abs_H", count ? sum / count : 0.0}, {"flagged", H.flagged}};
}

// Fraction of spectral energy in the outer third of the resolved wavenumbers.
double spectral_tail(const ComplexField& U) {
  const Fft2D& fft = fft_for(U.grid());
  std::vector<cplx> hat(U.size());
  fft.forward(U.values(), hat);
  double kx_max = 0.0, ky_max = 0.0;
  for (std::size_t i = 0; i < hat.size(); ++i) {
    const Wavenumber k = fft.wavenumber(i);
    kx_max = std::max(kx_max, std::abs(k.kx_full));
    ky_max = std::max(ky_max, std::abs(k.ky_full));
  }
  double total = 0.0, tail = 0.0;
  for (std::size_t i = 0; i < hat.size(); ++i) {
    const Wavenumber k = fft.wavenumber(i);
    const double e = std::norm(hat[i]);
    total += e;
    if (std::abs(k.kx_full) > 2.0 / 3.0 * kx_max || std::abs(k.ky_full) > 2.0 / 3.0 * ky_max) tail += e;
  }
  return total > 0.0 ? tail / total : 0.0;
}

std::string step_name(std::size_t step) {
  std::ostringstream os;
  os << "U_" << std::setw(6) << std::setfill('0') << step << ".csv";
  return os.str();
}

}  // namespace

int cmd_gen_surface(RunConfig& cfg, std::ostream& out) {
  SurfaceMap s;
  json meta;
  if (!cfg.from_dsii.empty()) {
    const Grid2D g = resolve_grid(cfg, {81, 81}, {-2, 2, -2, 2}, false);
    const ExactSolution sol = catalog(cfg.from_dsii, cfg.c);
    s = heat_graph(sol, cfg.c, g, cfg.t);
    meta["source"] = "dsii:" + cfg.from_dsii;
    meta["c"] = complex_json(cfg.c);
    meta["t"] = cfg.t;
    if (cfg.invert) {
      s = invert_surface(s);
      meta["willmore"] = 4.0 * l2_norm_sq(sol.U_sampler(cfg.t, cfg.c)).value;
      meta["potential"] = "exact DSII solution";
    } else {
      meta["willmore"] = 0.0;
      meta["potential"] = "zero";
    }
  } else {
    SpinorField psi;
    ComplexField U;
    bool known_potential = true;
    if (!cfg.spinor_csv.empty()) {
      const std::vector<ComplexField> f = read_fields_csv(cfg.spinor_csv);
      if (f.size() < 2) throw FormatError("spinor CSV needs two complex columns");
      psi = {f[0], f[1]};
      cfg.grid = Resolution{psi.grid().nx(), psi.grid().ny()};
      const Bounds& b = psi.grid().bounds();
      cfg.box = b;
      cfg.periodic = psi.grid().periodic_x() && psi.grid().periodic_y();
      known_potential = false;
      meta["source"] = "csv:" + cfg.spinor_csv.string();
    } else {
      const bool soliton = cfg.spinor == "soliton";
      const Grid2D g = soliton ? resolve_grid(cfg, {201, 21}, {-4, 4, 0, 1}, false)
                               : resolve_grid(cfg, {65, 65}, {-1, 1, -1, 1}, false);
      psi = named_spinor(cfg.spinor, g, U);
      meta["source"] = "spinor:" + cfg.spinor;
    }
    s = integrate_surface_r3(psi);
    meta["loop_defect"] = s.loop_defect;
    if (cfg.invert) s = invert_surface(s);
    if (known_potential && !cfg.invert) {
      const WillmoreResult w = willmore(U);
      meta["willmore"] = w.value;
      meta["willmore_truncated"] = w.truncated;
    } else {
      meta["willmore"] = nullptr;
    }
  }
  meta["dim"] = s.dim;
  meta["conformality_residual"] = conformality_residual(s);
  meta["curvature"] = curvature_stats(s);
  json singular = json::array();
  for (std::size_t i = 0; i < s.grid.size(); ++i)
    if (s.is_singular(i)) {
      const cplx z = s.grid.z(i);
      singular.push_back({{"ix", s.grid.ix_of(i)}, {"iy", s.grid.iy_of(i)}, {"z", complex_json(z)}});
    }
  meta["singular_nodes"] = singular;

  ProjectionSpec proj;
  if (cfg.projection == "stereo") {
    proj.kind = R4Projection::stereographic;
    proj.pole = cfg.pole;
  }
  const MeshFormat fmt = mesh_format_from_string(cfg.format);
  const MeshReport rep = export_mesh(s, fmt, cfg.out / ("surface." + cfg.format), proj, meta.dump());
  meta["mesh"] = {{"path", rep.mesh_path.string()},
                  {"vertices", rep.vertices},
                  {"triangles", rep.triangles},
                  {"holes", rep.holes},
                  {"euler_characteristic", rep.euler_characteristic}};
  write_text(cfg.out / "metadata.json", meta.dump(2) + "\n");

  out << "surface: " << meta["source"].get<std::string>() << " in R" << s.dim << "\n"
      << "mesh: " << rep.mesh_path.string() << " (" << rep.vertices << " vertices, " << rep.triangles
      << " triangles, " << rep.holes << " omitted nodes)\n"
      << "willmore: " << (meta["willmore"].is_null() ? std::string("n/a") : meta["willmore"].dump()) << "\n"
      << "conformality residual: " << meta["conformality_residual"].get<double>() << "\n"
      << "singular nodes: " << singular.size() << "\n";
  return 0;
}

int cmd_evolve(RunConfig& cfg, std::ostream& out) {
  const bool ozawa = cfg.from == "ozawa";
  const Grid2D g = ozawa ? resolve_grid(cfg, {256, 256}, {-10, 10, -10, 10}, true)
                         : resolve_grid(cfg, {128, 128}, {-30, 30, -30, 30}, true);
  if (!*cfg.periodic) throw ConfigError("evolve needs a periodic grid (--periodic)");
  const double t0 = ozawa ? 0.0 : cfg.t;
  cfg.t = t0;

  ComplexField U0;
  std::optional<ExactSolution> exact;
  double blowup = 0.0;
  if (cfg.from == "s1" || cfg.from == "s2") {
    exact = catalog(cfg.from, cfg.c);
    U0 = sample_flagged(g, exact->U_sampler(t0, cfg.c));
    if (U0.has_singular()) throw DomainError("initial datum is singular on the grid");
  } else if (cfg.from == "zero") {
    U0 = ComplexField(g);
  } else if (cfg.from == "ozawa") {
    const Grid2D physical = to_physical(ComplexField(g)).grid();
    U0 = from_physical(ozawa_initial(physical, cfg.a, cfg.b)) * cplx(std::sqrt(2.0));
    // physical time T = 2t
    blowup = ozawa_blowup_time(cfg.a, cfg.b) / 2.0;
  } else {
    throw ConfigError("unknown initial datum '" + cfg.from + "'");
  }
  if (!cfg.t_end) cfg.t_end = ozawa && blowup > 0.0 ? 0.95 * blowup : t0 + 0.1;
  const double t_end = *cfg.t_end;
  if (!(t_end > t0)) throw ConfigError("t-end must be after the start time");

  EvolverState st = make_state(U0, t0, cfg.dt);
  StepOptions so;
  so.kappa = cfg.kappa;
  so.record_every = 1;

  std::ostringstream history;
  history << "step,t,T,norm2,drift\n";
  history.precision(17);
  auto record = [&] {
    history << st.steps << ',' << st.t << ',' << 2.0 * st.t << ',' << l2_norm_sq(st.U) << ',' << st.drift() << '\n';
  };
  record();
  const std::filesystem::path snapdir = cfg.out / "snapshots";
  if (cfg.snapshot_every > 0) {
    std::filesystem::create_directories(snapdir);
    write_field_csv(snapdir / step_name(0), st.U);
  }

  json summary;
  summary["from"] = cfg.from;
  summary["aborted"] = false;
  summary["resolution_warning"] = nullptr;
  const double tail0 = spectral_tail(st.U);
  const double tail_limit = std::max(1e-4, 10.0 * tail0);
  summary["spectral_tail_initial"] = tail0;
  bool warned = false;
  auto watch = [&] {
    const double tail = spectral_tail(st.U);
    if (!warned && tail > tail_limit) {
      warned = true;
      summary["resolution_warning"] = {{"t", st.t}, {"T", 2.0 * st.t}, {"spectral_tail", tail}};
    }
    return tail;
  };
  const double nominal = cfg.dt;
  try {
    while (st.t < t_end - 1e-12 * std::max(1.0, std::abs(t_end))) {
      st.dt = std::min(nominal, t_end - st.t);
      dsii_step(st, so);
      record();
      if (cfg.snapshot_every > 0 && st.steps % cfg.snapshot_every == 0) write_field_csv(snapdir / step_name(st.steps), st.U);
      if (st.steps % 10 == 0) watch();
    }
  } catch (const NumericalError& e) {
    summary["aborted"] = true;
    summary["abort_reason"] = e.what();
  }
  st.dt = nominal;
  summary["spectral_tail_final"] = watch();

  write_text(cfg.out / "norm_history.csv", history.str());
  write_field_csv(cfg.out / "U_final.csv", st.U);
  summary["steps"] = st.steps;
  summary["t_final"] = st.t;
  summary["norm2_initial"] = st.initial_norm2;
  summary["norm2_final"] = l2_norm_sq(st.U);
  summary["drift"] = st.drift();
  if (ozawa) summary["blowup_time_T"] = 2.0 * blowup;
  if (exact) {
    const ComplexField Ue = sample_flagged(g, exact->U_sampler(st.t, cfg.c));
    summary["relative_l2_error"] = std::sqrt(l2_norm_sq(st.U - Ue) / l2_norm_sq(Ue));
  }
  write_text(cfg.out / "summary.json", summary.dump(2) + "\n");

  out << "evolve " << cfg.from << ": " << st.steps << " steps to t = " << st.t << ", norm drift " << st.drift()
      << "\n";
  if (summary.contains("relative_l2_error"))
    out << "relative L2 error vs exact: " << summary["relative_l2_error"].get<double>() << "\n";
  if (!summary["resolution_warning"].is_null())
    out << "warning: resolution loss at t = " << summary["resolution_warning"]["t"].get<double>()
        << " (spectral tail " << summary["resolution_warning"]["spectral_tail"].get<double>() << ")\n";
  if (summary["aborted"].get<bool>()) {
    out << "aborted: " << summary["abort_reason"].get<std::string>() << "\n";
    return 1;
  }
  return 0;
}

int cmd_dsii(RunConfig& cfg, std::ostream& out) {
  json summary;
  summary["solution"] = cfg.solution;
  if (cfg.solution == "ozawa") {
    const Grid2D g = resolve_grid(cfg, {801, 801}, {-100, 100, -100, 100}, false);
    const ComplexField U = ozawa_initial(g, cfg.a, cfg.b);
    write_field_csv(cfg.out / "fields.csv", U);
    const double n2 = integrate2d(U.abs2()).real();
    summary["a"] = cfg.a;
    summary["b"] = cfg.b;
    summary["norm2"] = n2;
    summary["norm2_over_pi"] = n2 / kPi;
    summary["blowup_time"] = ozawa_blowup_time(cfg.a, cfg.b);
    write_text(cfg.out / "summary.json", summary.dump(2) + "\n");
    out << "ozawa a=" << cfg.a << " b=" << cfg.b << ": |U|^2 = " << n2 / kPi << " pi on the box\n";
    return 0;
  }
  const Grid2D g = resolve_grid(cfg, {129, 129}, {-4, 4, -4, 4}, false);
  const ExactSolution sol = catalog(cfg.solution, cfg.c);
  const ComplexField U = sample_flagged(g, sol.U_sampler(cfg.t, cfg.c));
  ComplexField V = sample_flagged(g, sol.V_sampler(cfg.t, cfg.c));
  write_fields_csv(cfg.out / "fields.csv", {{"U_re", "U_im"}, {"V_re", "V_im"}}, {&U, &V});

  const NormResult norm = l2_norm_sq(sol.U_sampler(cfg.t, cfg.c));
  json events = json::array();
  for (const SingularEvent& e : singular_times(sol))
    events.push_back({{"t_sing", e.t_sing}, {"z", complex_json(e.location)}, {"coeff", complex_json(e.coefficient)}});
  write_text(cfg.out / "events.json", events.dump(2) + "\n");

  summary["c"] = complex_json(cfg.c);
  summary["t"] = cfg.t;
  summary["norm2"] = norm.value;
  summary["norm2_over_pi"] = norm.value / kPi;
  summary["masked_nodes"] = norm.masked;
  summary["decay_ratio"] = norm.decay_ratio;
  summary["singular_times"] = events;
  write_text(cfg.out / "summary.json", summary.dump(2) + "\n");

  out << cfg.solution << " c=" << format_complex(cfg.c) << " t=" << cfg.t << ": |U|^2 = " << norm.value / kPi
      << " pi (" << norm.masked << " masked)\n";
  for (const auto& e : events)
    out << "singular time " << e["t_sing"].get<double>() << ", coefficient " << e["coeff"].dump() << "\n";
  return 0;
}

int cmd_willmore(RunConfig& cfg, std::ostream& out) {
  Potential1D p;
  if (cfg.potential == "soliton") {
    const double half = cfg.box ? std::max(std::abs(cfg.box->x_min), std::abs(cfg.box->x_max)) : 25.0;
    p = Potential1D::soliton(cfg.n, half, cfg.samples);
  } else {
    p = potential_from_name(cfg.potential, cfg.n, cfg.samples);
  }
  const WillmoreBound w = willmore_bound_check(p, cfg.n, cfg.tol.value_or(1e-6));
  json j{{"potential", p.name()}, {"n", cfg.n}, {"value", w.value}, {"bound", w.bound}, {"pass", w.pass},
         {"equality", w.equality}};
  write_text(cfg.out / "willmore.json", j.dump(2) + "\n");
  out << j.dump() << "\n";
  return w.pass ? 0 : 1;
}

}  // namespace spinsurf::cli
