#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "spinsurf/cli.hpp"
#include "spinsurf/error.hpp"
#include "spinsurf/parallel.hpp"

namespace spinsurf::cli {

namespace {

// Flag values land in `flags`; after parsing, only options that were given
// are copied over the config loaded from --config.
class Binder {
 public:
  explicit Binder(RunConfig& flags) : flags_(flags) {}

  template <class T>
  CLI::Option* value(CLI::App* app, const std::string& name, T RunConfig::*member, const std::string& help) {
    CLI::Option* opt = app->add_option(name, flags_.*member, help);
    appliers_.push_back({opt, [member](RunConfig& dst, const RunConfig& src) { dst.*member = src.*member; }});
    return opt;
  }

  CLI::Option* flag(CLI::App* app, const std::string& name, bool RunConfig::*member, const std::string& help) {
    CLI::Option* opt = app->add_flag(name, flags_.*member, help);
    appliers_.push_back({opt, [member](RunConfig& dst, const RunConfig&) { dst.*member = true; }});
    return opt;
  }

  CLI::Option* text(CLI::App* app, const std::string& name, std::string& slot,
                    std::function<void(RunConfig&, const std::string&)> apply, const std::string& help) {
    CLI::Option* opt = app->add_option(name, slot, help);
    appliers_.push_back({opt, [&slot, apply](RunConfig& dst, const RunConfig&) { apply(dst, slot); }});
    return opt;
  }

  CLI::Option* number(CLI::App* app, const std::string& name, double& slot,
                      std::function<void(RunConfig&, double)> apply, const std::string& help) {
    CLI::Option* opt = app->add_option(name, slot, help);
    appliers_.push_back({opt, [&slot, apply](RunConfig& dst, const RunConfig&) { apply(dst, slot); }});
    return opt;
  }

  void apply(RunConfig& cfg) const {
    for (const auto& [opt, fn] : appliers_)
      if (opt->count() > 0) fn(cfg, flags_);
  }

 private:
  RunConfig& flags_;
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&, const RunConfig&)>>> appliers_;
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot read config " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"spinsurf: spinor surfaces, Moutard transformations and exact DSII solutions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "0.1.0");

  RunConfig flags;
  Binder bind(flags);
  std::string config_path, grid_text, box_text, c_text;
  double tol = 0.0, t_end = 0.0;
  bool periodic = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run config; flags override its values");
    bind.text(sub, "--grid", grid_text, [](RunConfig& c, const std::string& s) { c.grid = parse_grid(s); },
              "grid resolution NXxNY");
    bind.text(sub, "--box", box_text, [](RunConfig& c, const std::string& s) { c.box = parse_box(s); },
              "domain XMIN:XMAX:YMIN:YMAX");
    CLI::Option* p = sub->add_flag("--periodic", periodic, "periodic in both directions");
    bind.number(sub, "--tol", tol, [](RunConfig& c, double v) { c.tol = v; }, "tolerance override");
    bind.value(sub, "--out", &RunConfig::out, "output directory");
    bind.value(sub, "--threads", &RunConfig::threads, "worker threads (0 = hardware)");
    bind.value(sub, "--seed", &RunConfig::seed, "seed for randomized checks");
    return p;
  };
  auto complex_c = [&](CLI::App* sub) {
    bind.text(sub, "--c", c_text, [](RunConfig& c, const std::string& s) { c.c = parse_complex(s); },
              "heat-polynomial parameter, e.g. 1, 1+0i, 0.5i");
    bind.value(sub, "--t", &RunConfig::t, "time");
  };

  std::vector<std::pair<CLI::App*, CLI::Option*>> subs;

  CLI::App* gen = app.add_subcommand("gen-surface", "integrate a spinor representation and export a mesh");
  subs.push_back({gen, common(gen)});
  bind.value(gen, "--spinor", &RunConfig::spinor, "plane | enneper | soliton")
      ->check(CLI::IsMember({"plane", "enneper", "soliton"}));
  bind.value(gen, "--spinor-csv", &RunConfig::spinor_csv, "CSV with psi1, psi2 columns");
  bind.value(gen, "--from-dsii", &RunConfig::from_dsii, "s1 | s2: minimal graph of the heat polynomial");
  complex_c(gen);
  bind.flag(gen, "--invert", &RunConfig::invert, "apply the inversion x -> -x/|x|^2");
  bind.value(gen, "--format", &RunConfig::format, "obj | ply");
  bind.value(gen, "--projection", &RunConfig::projection, "drop | stereo (R4 surfaces)");
  bind.value(gen, "--pole", &RunConfig::pole, "pole distance of the stereographic projection");

  CLI::App* ver = app.add_subcommand("verify", "run a verification suite");
  subs.push_back({ver, common(ver)});
  bind.value(ver, "--suite", &RunConfig::suite,
             "norms | dirac | symbolic | singular | willmore | moutard | weierstrass | evolve | reduction | all");

  CLI::App* evo = app.add_subcommand("evolve", "split-step evolution of the DSII system");
  subs.push_back({evo, common(evo)});
  bind.value(evo, "--from", &RunConfig::from, "s1 | s2 | zero | ozawa")->check(CLI::IsMember({"s1", "s2", "zero", "ozawa"}));
  complex_c(evo);
  bind.number(evo, "--t-end", t_end, [](RunConfig& c, double v) { c.t_end = v; }, "final time");
  bind.value(evo, "--dt", &RunConfig::dt, "time step");
  bind.value(evo, "--a", &RunConfig::a, "Ozawa width a");
  bind.value(evo, "--b", &RunConfig::b, "Ozawa chirp b");
  bind.value(evo, "--snapshot-every", &RunConfig::snapshot_every, "write U every this many steps (0 = final only)");
  bind.value(evo, "--kappa", &RunConfig::kappa, "enforce dt <= kappa h^2 when positive");

  CLI::App* ds = app.add_subcommand("dsii", "sample an exact solution, its norm and singular times");
  subs.push_back({ds, common(ds)});
  bind.value(ds, "--solution", &RunConfig::solution, "s1 | s2 | ozawa")->check(CLI::IsMember({"s1", "s2", "ozawa"}));
  complex_c(ds);
  bind.value(ds, "--a", &RunConfig::a, "Ozawa width a");
  bind.value(ds, "--b", &RunConfig::b, "Ozawa chirp b");

  CLI::App* wil = app.add_subcommand("willmore", "Willmore value of a strip potential against 4 pi N^2");
  subs.push_back({wil, common(wil)});
  bind.value(wil, "--potential", &RunConfig::potential, "soliton | clifford");
  bind.value(wil, "--n", &RunConfig::n, "N in the bound 4 pi N^2 (and the soliton index)");
  bind.value(wil, "--samples", &RunConfig::samples, "samples along x");

  std::vector<const char*> argv{"spinsurf"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << "spinsurf 0.1.0\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, er;
    app.exit(e, o, er);
    err << er.str() << o.str();
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) merge_json(cfg, read_file(config_path));
    bind.apply(cfg);
    for (const auto& [sub, popt] : subs)
      if (sub->parsed()) {
        cfg.command = sub->get_name();
        if (popt->count() > 0) cfg.periodic = true;
      }
    validate(cfg);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  set_thread_count(cfg.threads);
  try {
    std::filesystem::create_directories(cfg.out);
    int code = 0;
    if (cfg.command == "gen-surface") code = cmd_gen_surface(cfg, out);
    else if (cfg.command == "verify") code = cmd_verify(cfg, out);
    else if (cfg.command == "evolve") code = cmd_evolve(cfg, out);
    else if (cfg.command == "dsii") code = cmd_dsii(cfg, out);
    else if (cfg.command == "willmore") code = cmd_willmore(cfg, out);
    write_run_config(cfg);
    return code;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    write_run_config(cfg);
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    try {
      write_run_config(cfg);
    } catch (const std::exception&) {
    }
    return 3;
  }
}

}  // namespace spinsurf::cli
