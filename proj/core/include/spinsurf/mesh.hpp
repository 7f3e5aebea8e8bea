#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "spinsurf/surface.hpp"

namespace spinsurf {

enum class MeshFormat { obj, ply };

/// How an R⁴ surface is shown in R³.
enum class R4Projection {
  drop_x4,        ///< (x1, x2, x3)
  stereographic,  ///< central projection from (0, 0, 0, d) onto x4 = 0
};

struct ProjectionSpec {
  R4Projection kind = R4Projection::drop_x4;
  double pole = 1.0;  ///< d for the stereographic projection
};

/// Triangulated view of a surface over its grid.
struct TriMesh {
  std::vector<std::array<float, 3>> vertices;
  std::vector<std::array<int, 3>> triangles;  ///< 0-based
  std::vector<std::size_t> vertex_node;       ///< grid node of each vertex
  std::vector<std::size_t> omitted_nodes;     ///< singular nodes left out
  std::array<double, 2> x4_range{0.0, 0.0};

  /// V - E + F with edges counted once.
  long euler_characteristic() const;
  /// Number of edges used by exactly one triangle.
  std::size_t boundary_edges() const;
};

/// Splits every grid cell with four usable corners into two triangles.
/// Cells wrap across periodic axes. Singular nodes (and, for the
/// stereographic view, nodes at the pole) are omitted and reported.
TriMesh triangulate(const SurfaceMap& s, const ProjectionSpec& projection = {});

MeshFormat mesh_format_from_string(const std::string& name);

struct MeshReport {
  std::size_t vertices = 0;
  std::size_t triangles = 0;
  std::size_t holes = 0;  ///< omitted nodes
  long euler_characteristic = 0;
  std::filesystem::path mesh_path;
  std::filesystem::path sidecar_path;
};

/// Writes the mesh (OBJ text or binary little-endian PLY) and a JSON sidecar
/// "<path>.json" holding grid, basepoint, omitted nodes and x4 range.
MeshReport export_mesh(const SurfaceMap& s, MeshFormat format, const std::filesystem::path& path,
                       const ProjectionSpec& projection = {}, const std::string& extra_json = "{}");

}  // namespace spinsurf
