#pragma once

// Flat binary ("SGF2") and CSV export of grid fields.
//
// Binary layout, little-endian:
//   bytes 0-3   magic "SGF2"
//   bytes 4-7   u32 n_interior
//   bytes 8-11  u32 component count (1 scalar, 2 vector)
//   bytes 12-15 u32 reserved, written as 0
// followed by each component as n*n IEEE-754 doubles in row-major order of
// (i, j): the x1 index i is the row, the x2 index j varies fastest.

#include <filesystem>
#include <variant>

#include "sgfopt/grid_ops.hpp"

namespace sgfopt {

void write_field(const std::filesystem::path& path, const ScalarField2D& f);
void write_field(const std::filesystem::path& path, const VectorField2D& v);

/// Reads either kind; throws FormatError on a bad header or short file.
std::variant<ScalarField2D, VectorField2D> read_field(const std::filesystem::path& path);
ScalarField2D read_scalar_field(const std::filesystem::path& path);
VectorField2D read_vector_field(const std::filesystem::path& path);

/// CSV with header `x1,x2,value` (scalar) or `x1,x2,u1,u2` (vector).
void write_csv(const std::filesystem::path& path, const ScalarField2D& f);
void write_csv(const std::filesystem::path& path, const VectorField2D& v);

}  // namespace sgfopt
