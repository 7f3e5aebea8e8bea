#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spinsurf/grid.hpp"

namespace spinsurf::cli {

/// Everything a run needs. Unset optionals take the subcommand's default
/// and are filled in before the config is written out.
struct RunConfig {
  std::string command;
  std::optional<Resolution> grid;
  std::optional<Bounds> box;
  std::optional<bool> periodic;
  std::optional<double> tol;
  std::filesystem::path out = "spinsurf_out";
  int threads = 0;
  std::uint64_t seed = 20240611;

  // gen-surface
  std::string spinor = "plane";
  std::filesystem::path spinor_csv;
  std::string from_dsii;
  bool invert = false;
  std::string format = "obj";
  std::string projection = "drop";
  double pole = 1.0;

  // dsii / gen-surface / evolve
  std::string solution = "s1";
  cplx c{1.0, 0.0};
  double t = 0.0;

  // verify
  std::string suite = "all";

  // evolve
  std::string from = "s1";
  std::optional<double> t_end;
  double dt = 1e-3;
  double a = 1.0;
  double b = -1.0;
  std::size_t snapshot_every = 0;
  double kappa = 0.0;

  // willmore
  std::string potential = "soliton";
  int n = 1;
  std::size_t samples = 4001;
};

std::string to_json(const RunConfig& cfg);
/// Keys absent from the document keep the values already in `cfg`.
void merge_json(RunConfig& cfg, const std::string& text);
/// Throws ConfigError on inconsistent settings.
void validate(const RunConfig& cfg);

/// "NXxNY"
Resolution parse_grid(const std::string& text);
/// "XMIN:XMAX:YMIN:YMAX"
Bounds parse_box(const std::string& text);
/// "1", "-2.5", "i", "0.5i", "1+2i", "1-0.5i", or "re,im".
cplx parse_complex(const std::string& text);
std::string format_complex(cplx c);

/// Parses arguments, merges the --config file (flags win), runs the
/// subcommand and returns the process exit code: 0 success, 1 a check or
/// bound failed, 2 bad usage or configuration, 3 runtime failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cmd_gen_surface(RunConfig& cfg, std::ostream& out);
int cmd_verify(RunConfig& cfg, std::ostream& out);
int cmd_evolve(RunConfig& cfg, std::ostream& out);
int cmd_dsii(RunConfig& cfg, std::ostream& out);
int cmd_willmore(RunConfig& cfg, std::ostream& out);

/// Writes `<cfg.out>/run_config.json`.
void write_run_config(const RunConfig& cfg);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace spinsurf::cli
