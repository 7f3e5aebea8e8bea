#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "spinsurf/cli.hpp"
#include "spinsurf/error.hpp"

namespace spinsurf::cli {

using nlohmann::json;

namespace {

double to_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end) throw ConfigError("bad " + what + ": '" + s + "'");
  return v;
}

json bounds_json(const Bounds& b) { return json::array({b.x_min, b.x_max, b.y_min, b.y_max}); }

}  // namespace

Resolution parse_grid(const std::string& text) {
  const auto x = text.find_first_of("xX");
  if (x == std::string::npos) throw ConfigError("grid must look like NXxNY, got '" + text + "'");
  const double nx = to_double(text.substr(0, x), "grid"), ny = to_double(text.substr(x + 1), "grid");
  if (nx < 2 || ny < 2 || nx != std::floor(nx) || ny != std::floor(ny))
    throw ConfigError("grid sizes must be integers >= 2, got '" + text + "'");
  return {static_cast<int>(nx), static_cast<int>(ny)};
}

Bounds parse_box(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ':')) v.push_back(to_double(part, "box"));
  if (v.size() != 4) throw ConfigError("box must look like XMIN:XMAX:YMIN:YMAX, got '" + text + "'");
  if (!(v[0] < v[1]) || !(v[2] < v[3])) throw ConfigError("box must have xmin < xmax and ymin < ymax");
  return {v[0], v[1], v[2], v[3]};
}

cplx parse_complex(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (ch != ' ') s += ch;
  if (s.empty()) throw ConfigError("empty complex number");
  if (const auto comma = s.find(','); comma != std::string::npos)
    return {to_double(s.substr(0, comma), "complex"), to_double(s.substr(comma + 1), "complex")};
  if (s.back() != 'i') return {to_double(s, "complex"), 0.0};
  s.pop_back();
  // split at the last sign that is not an exponent sign or the leading one
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;)
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  auto imag = [&](const std::string& p) {
    if (p.empty() || p == "+") return 1.0;
    if (p == "-") return -1.0;
    return to_double(p[0] == '+' ? p.substr(1) : p, "complex");
  };
  if (split == std::string::npos) return {0.0, imag(s)};
  return {to_double(s.substr(0, split), "complex"), imag(s.substr(split))};
}

std::string format_complex(cplx c) {
  std::ostringstream os;
  os.precision(17);
  os << c.real() << (c.imag() < 0 || std::signbit(c.imag()) ? "-" : "+") << std::abs(c.imag()) << "i";
  return os.str();
}

std::string to_json(const RunConfig& cfg) {
  json j;
  j["command"] = cfg.command;
  if (cfg.grid) j["grid"] = {cfg.grid->nx, cfg.grid->ny};
  if (cfg.box) j["box"] = bounds_json(*cfg.box);
  if (cfg.periodic) j["periodic"] = *cfg.periodic;
  if (cfg.tol) j["tol"] = *cfg.tol;
  j["out"] = cfg.out.string();
  j["threads"] = cfg.threads;
  j["seed"] = cfg.seed;
  j["spinor"] = cfg.spinor;
  j["spinor_csv"] = cfg.spinor_csv.string();
  j["from_dsii"] = cfg.from_dsii;
  j["invert"] = cfg.invert;
  j["format"] = cfg.format;
  j["projection"] = cfg.projection;
  j["pole"] = cfg.pole;
  j["solution"] = cfg.solution;
  j["c"] = {cfg.c.real(), cfg.c.imag()};
  j["t"] = cfg.t;
  j["suite"] = cfg.suite;
  j["from"] = cfg.from;
  if (cfg.t_end) j["t_end"] = *cfg.t_end;
  j["dt"] = cfg.dt;
  j["a"] = cfg.a;
  j["b"] = cfg.b;
  j["snapshot_every"] = cfg.snapshot_every;
  j["kappa"] = cfg.kappa;
  j["potential"] = cfg.potential;
  j["n"] = cfg.n;
  j["samples"] = cfg.samples;
  return j.dump(2) + "\n";
}

void merge_json(RunConfig& cfg, const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    auto take = [&](const char* key, auto& dst) {
      if (j.contains(key)) j.at(key).get_to(dst);
    };
    take("command", cfg.command);
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      cfg.grid = g.is_string() ? parse_grid(g.get<std::string>()) : Resolution{g.at(0).get<int>(), g.at(1).get<int>()};
    }
    if (j.contains("box")) {
      const auto& b = j.at("box");
      cfg.box = b.is_string() ? parse_box(b.get<std::string>())
                              : Bounds{b.at(0).get<double>(), b.at(1).get<double>(), b.at(2).get<double>(),
                                       b.at(3).get<double>()};
    }
    if (j.contains("periodic")) cfg.periodic = j.at("periodic").get<bool>();
    if (j.contains("tol")) cfg.tol = j.at("tol").get<double>();
    if (j.contains("out")) cfg.out = j.at("out").get<std::string>();
    take("threads", cfg.threads);
    take("seed", cfg.seed);
    take("spinor", cfg.spinor);
    if (j.contains("spinor_csv")) cfg.spinor_csv = j.at("spinor_csv").get<std::string>();
    take("from_dsii", cfg.from_dsii);
    take("invert", cfg.invert);
    take("format", cfg.format);
    take("projection", cfg.projection);
    take("pole", cfg.pole);
    take("solution", cfg.solution);
    if (j.contains("c")) {
      const auto& c = j.at("c");
      cfg.c = c.is_string() ? parse_complex(c.get<std::string>())
              : c.is_number() ? cplx(c.get<double>(), 0.0)
                              : cplx(c.at(0).get<double>(), c.at(1).get<double>());
    }
    take("t", cfg.t);
    take("suite", cfg.suite);
    take("from", cfg.from);
    if (j.contains("t_end")) cfg.t_end = j.at("t_end").get<double>();
    take("dt", cfg.dt);
    take("a", cfg.a);
    take("b", cfg.b);
    take("snapshot_every", cfg.snapshot_every);
    take("kappa", cfg.kappa);
    take("potential", cfg.potential);
    take("n", cfg.n);
    take("samples", cfg.samples);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
}

void validate(const RunConfig& cfg) {
  if (cfg.threads < 0) throw ConfigError("threads must be >= 0");
  if (cfg.tol && !(*cfg.tol > 0.0)) throw ConfigError("tol must be positive");
  if (cfg.grid && (cfg.grid->nx < 2 || cfg.grid->ny < 2)) throw ConfigError("grid sizes must be >= 2");
  if (cfg.box && (!(cfg.box->x_min < cfg.box->x_max) || !(cfg.box->y_min < cfg.box->y_max)))
    throw ConfigError("box must have xmin < xmax and ymin < ymax");
  if (!(cfg.dt > 0.0)) throw ConfigError("dt must be positive");
  if (cfg.kappa < 0.0) throw ConfigError("kappa must be >= 0");
  if (cfg.n < 0) throw ConfigError("n must be >= 0");
  if (cfg.samples < 8) throw ConfigError("samples must be >= 8");
  if (cfg.format != "obj" && cfg.format != "ply") throw ConfigError("format must be obj or ply");
  if (cfg.projection != "drop" && cfg.projection != "stereo") throw ConfigError("projection must be drop or stereo");
  if (cfg.out.empty()) throw ConfigError("out must not be empty");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw FormatError("cannot open " + path.string());
  os << text;
}

void write_run_config(const RunConfig& cfg) { write_text(cfg.out / "run_config.json", to_json(cfg)); }

}  // namespace spinsurf::cli
