#include "spinsurf/mesh.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>

#include "json.hpp"
#include "spinsurf/error.hpp"
#include "spinsurf/field_io.hpp"

namespace spinsurf {

long TriMesh::euler_characteristic() const {
  std::map<std::pair<int, int>, int> edges;
  for (const auto& t : triangles)
    for (int k = 0; k < 3; ++k) {
      const int a = t[k], b = t[(k + 1) % 3];
      ++edges[{std::min(a, b), std::max(a, b)}];
    }
  return static_cast<long>(vertices.size()) - static_cast<long>(edges.size()) + static_cast<long>(triangles.size());
}

std::size_t TriMesh::boundary_edges() const {
  std::map<std::pair<int, int>, int> edges;
  for (const auto& t : triangles)
    for (int k = 0; k < 3; ++k) {
      const int a = t[k], b = t[(k + 1) % 3];
      ++edges[{std::min(a, b), std::max(a, b)}];
    }
  return static_cast<std::size_t>(std::count_if(edges.begin(), edges.end(), [](const auto& e) { return e.second == 1; }));
}

TriMesh triangulate(const SurfaceMap& s, const ProjectionSpec& projection) {
  const Grid2D& g = s.grid;
  TriMesh mesh;
  std::vector<int> vid(g.size(), -1);
  mesh.x4_range = {std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Point4 x = s.point(i);
    bool usable = !s.is_singular(i);
    std::array<double, 3> p{x[0], x[1], x[2]};
    if (usable && s.dim == 4) {
      mesh.x4_range[0] = std::min(mesh.x4_range[0], x[3]);
      mesh.x4_range[1] = std::max(mesh.x4_range[1], x[3]);
      if (projection.kind == R4Projection::stereographic) {
        const double d = projection.pole;
        const double denom = d - x[3];
        if (std::abs(denom) <= 1e-12 * std::max(1.0, std::abs(d))) {
          usable = false;
        } else {
          for (auto& c : p) c *= d / denom;
        }
      }
    }
    if (usable) usable = std::all_of(p.begin(), p.end(), [](double c) { return std::isfinite(c); });
    if (!usable) {
      mesh.omitted_nodes.push_back(i);
      continue;
    }
    vid[i] = static_cast<int>(mesh.vertices.size());
    mesh.vertices.push_back({static_cast<float>(p[0]), static_cast<float>(p[1]), static_cast<float>(p[2])});
    mesh.vertex_node.push_back(i);
  }
  if (s.dim == 3 || mesh.vertices.empty()) mesh.x4_range = {0.0, 0.0};
  const int cx = g.periodic_x() ? g.nx() : g.nx() - 1;
  const int cy = g.periodic_y() ? g.ny() : g.ny() - 1;
  for (int iy = 0; iy < cy; ++iy) {
    for (int ix = 0; ix < cx; ++ix) {
      const int jx = (ix + 1) % g.nx(), jy = (iy + 1) % g.ny();
      const int a = vid[g.index(ix, iy)], b = vid[g.index(jx, iy)];
      const int c = vid[g.index(jx, jy)], d = vid[g.index(ix, jy)];
      if (a < 0 || b < 0 || c < 0 || d < 0) continue;
      mesh.triangles.push_back({a, b, c});
      mesh.triangles.push_back({a, c, d});
    }
  }
  return mesh;
}

MeshFormat mesh_format_from_string(const std::string& name) {
  if (name == "obj") return MeshFormat::obj;
  if (name == "ply") return MeshFormat::ply;
  throw FormatError("unsupported mesh format: " + name);
}

namespace {

template <typename T>
void put_le(std::ofstream& os, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  os.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

void write_obj(const TriMesh& m, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw FormatError("cannot open " + path.string());
  os.precision(9);
  for (const auto& v : m.vertices) os << "v " << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
  for (const auto& t : m.triangles) os << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
}

void write_ply(const TriMesh& m, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw FormatError("cannot open " + path.string());
  os << "ply\nformat binary_little_endian 1.0\n"
     << "element vertex " << m.vertices.size() << "\nproperty float x\nproperty float y\nproperty float z\n"
     << "element face " << m.triangles.size() << "\nproperty list uchar int vertex_indices\nend_header\n";
  for (const auto& v : m.vertices)
    for (float c : v) put_le(os, c);
  for (const auto& t : m.triangles) {
    put_le(os, static_cast<unsigned char>(3));
    for (int k : t) put_le(os, static_cast<std::int32_t>(k));
  }
}

}  // namespace

MeshReport export_mesh(const SurfaceMap& s, MeshFormat format, const std::filesystem::path& path,
                       const ProjectionSpec& projection, const std::string& extra_json) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const TriMesh mesh = triangulate(s, projection);
  if (format == MeshFormat::obj)
    write_obj(mesh, path);
  else
    write_ply(mesh, path);

  using nlohmann::json;
  json meta;
  meta["grid"] = json::parse(grid_json(s.grid));
  meta["ambient_dim"] = s.dim;
  meta["basepoint"] = s.basepoint;
  meta["base_node"] = {s.base_node.ix, s.base_node.iy};
  meta["vertices"] = mesh.vertices.size();
  meta["triangles"] = mesh.triangles.size();
  meta["euler_characteristic"] = mesh.euler_characteristic();
  json holes = json::array();
  for (std::size_t i : mesh.omitted_nodes) holes.push_back({s.grid.ix_of(i), s.grid.iy_of(i)});
  meta["omitted_nodes"] = holes;
  if (s.dim == 4) {
    meta["projection"] = projection.kind == R4Projection::drop_x4 ? "drop_x4" : "stereographic";
    if (projection.kind == R4Projection::stereographic) meta["pole"] = projection.pole;
    meta["x4_range"] = mesh.x4_range;
  }
  meta["loop_defect"] = s.loop_defect;
  meta["extra"] = json::parse(extra_json);
  MeshReport r{mesh.vertices.size(), mesh.triangles.size(), mesh.omitted_nodes.size(), mesh.euler_characteristic(),
               path, path.string() + ".json"};
  std::ofstream js(r.sidecar_path);
  if (!js) throw FormatError("cannot open " + r.sidecar_path.string());
  js << meta.dump(2) << '\n';
  return r;
}

}  // namespace spinsurf
