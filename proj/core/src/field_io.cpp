#include "spinsurf/field_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "spinsurf/error.hpp"

namespace spinsurf {
namespace {

using nlohmann::json;

json grid_to_object(const Grid2D& g) {
  const Bounds& b = g.bounds();
  return json{{"x_min", b.x_min},       {"x_max", b.x_max},       {"y_min", b.y_min}, {"y_max", b.y_max},
              {"nx", g.nx()},           {"ny", g.ny()},           {"periodic_x", g.periodic_x()},
              {"periodic_y", g.periodic_y()}};
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw FormatError("cannot open " + path.string() + " for writing");
  os << std::setprecision(17);
  return os;
}

}  // namespace

std::string grid_json(const Grid2D& grid) { return grid_to_object(grid).dump(); }

Grid2D grid_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    return make_grid({j.at("x_min"), j.at("x_max"), j.at("y_min"), j.at("y_max")}, {j.at("nx"), j.at("ny")},
                     {j.at("periodic_x"), j.at("periodic_y")});
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad grid header: ") + e.what());
  }
}

void write_fields_csv(const std::filesystem::path& path, const std::vector<ColumnPair>& columns,
                      const std::vector<const ComplexField*>& fields) {
  if (fields.empty() || columns.size() != fields.size())
    throw FormatError("write_fields_csv: column/field count mismatch");
  for (const ComplexField* f : fields) require_same_grid(*fields.front(), *f, "write_fields_csv");
  const Grid2D& g = fields.front()->grid();
  std::ofstream os = open_out(path);
  os << "# " << grid_json(g) << '\n' << "ix,iy";
  for (const auto& [re, im] : columns) os << ',' << re << ',' << im;
  os << '\n';
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < g.size(); ++i) {
    os << g.ix_of(i) << ',' << g.iy_of(i);
    for (const ComplexField* f : fields) {
      const cplx v = f->is_singular(i) ? cplx(nan, nan) : (*f)[i];
      os << ',' << v.real() << ',' << v.imag();
    }
    os << '\n';
  }
}

std::vector<ComplexField> read_fields_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot open " + path.string());
  std::string line;
  std::getline(is, line);
  if (line.rfind("# ", 0) != 0) throw FormatError(path.string() + ": missing grid header");
  const Grid2D g = grid_from_json(line.substr(2));
  std::getline(is, line);
  const std::size_t columns = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
  if (columns < 4 || columns % 2 != 0) throw FormatError(path.string() + ": bad column header");
  std::vector<ComplexField> fields((columns - 2) / 2, ComplexField(g));
  std::size_t rows = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(ls, cell, ',')) v.push_back(std::strtod(cell.c_str(), nullptr));
    if (v.size() != columns) throw FormatError(path.string() + ": ragged row");
    const NodeIndex n{static_cast<int>(v[0]), static_cast<int>(v[1])};
    if (!g.contains(n)) throw FormatError(path.string() + ": node outside grid");
    const std::size_t i = g.index(n);
    for (std::size_t k = 0; k < fields.size(); ++k) {
      const cplx val(v[2 + 2 * k], v[3 + 2 * k]);
      fields[k][i] = val;
      if (!std::isfinite(val.real()) || !std::isfinite(val.imag())) fields[k].flag_singular(i);
    }
    ++rows;
  }
  if (rows != g.size()) throw FormatError(path.string() + ": row count does not match grid");
  return fields;
}

void write_field_csv(const std::filesystem::path& path, const ComplexField& f) {
  write_fields_csv(path, std::vector<ColumnPair>{ColumnPair{"re", "im"}}, {&f});
}

ComplexField read_field_csv(const std::filesystem::path& path) {
  auto fields = read_fields_csv(path);
  if (fields.size() != 1) throw FormatError(path.string() + ": expected a single field");
  return std::move(fields.front());
}

std::string bipoly_to_json(const BiPoly& p) {
  const bool params = p.has_parameters();
  json j = json::object();
  for (const auto& [key, c] : p.terms()) {
    const Exponents e = BiPoly::unpack(key);
    std::ostringstream k;
    k << e[0] << ',' << e[1] << ',' << e[2];
    if (params) k << ',' << e[3] << ',' << e[4];
    j[k.str()] = {c.real(), c.imag()};
  }
  return j.dump();
}

BiPoly bipoly_from_json(const std::string& text) {
  BiPoly p;
  try {
    const json j = json::parse(text);
    if (!j.is_object()) throw FormatError("BiPoly JSON must be an object");
    for (const auto& [k, v] : j.items()) {
      Exponents e{};
      std::istringstream ks(k);
      std::string part;
      int slot = 0;
      while (std::getline(ks, part, ',')) {
        if (slot >= 5) throw FormatError("BiPoly JSON key has too many exponents: " + k);
        e[slot++] = std::stoi(part);
      }
      if (slot != 3 && slot != 5) throw FormatError("BiPoly JSON key must have 3 or 5 exponents: " + k);
      p += BiPoly::monomial(cplx(v.at(0).get<double>(), v.at(1).get<double>()), e);
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad BiPoly JSON: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw FormatError("bad BiPoly JSON exponent");
  }
  return p;
}

}  // namespace spinsurf
