#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "spinsurf/bipoly.hpp"
#include "spinsurf/field.hpp"

namespace spinsurf {

/// Grid metadata as a JSON object string.
std::string grid_json(const Grid2D& grid);
Grid2D grid_from_json(const std::string& text);

/// Column names for the real and imaginary part of one field.
using ColumnPair = std::array<std::string, 2>;

/// Writes "# <grid json>", then a header "ix,iy,..." and one row per node
/// with a pair of columns per field. Singular nodes are written as nan.
void write_fields_csv(const std::filesystem::path& path, const std::vector<ColumnPair>& columns,
                      const std::vector<const ComplexField*>& fields);

/// Reads a file produced by write_fields_csv. Non-finite values are flagged
/// singular.
std::vector<ComplexField> read_fields_csv(const std::filesystem::path& path);

/// Single-field CSV with columns ix, iy, re, im.
void write_field_csv(const std::filesystem::path& path, const ComplexField& f);
ComplexField read_field_csv(const std::filesystem::path& path);

/// JSON object mapping "dz,dzbar,dt" (or "dz,dzbar,dt,dc,dcbar" when the
/// polynomial has parameters) to [re, im].
std::string bipoly_to_json(const BiPoly& p);
BiPoly bipoly_from_json(const std::string& text);

}  // namespace spinsurf
