#pragma once

#include <string>

#include "ringburst/field.hpp"

namespace ringburst {

// Text snapshot: header `r,z,value`, rows z-major, 17 significant digits.
void write_snapshot_csv(const ScalarField2D& f, const std::string& path);
// Rebuilds cell edges from node midpoints, so nonuniform grids read back
// with approximate weights; use the binary form for exact round trips.
ScalarField2D read_snapshot_csv(const std::string& path);

// Binary snapshot: raw little-endian float64 values at `path`, and the grid
// (nr, nz, node lists, edge lists) in the sidecar `path + ".meta"`.
void write_snapshot_bin(const ScalarField2D& f, const std::string& path);
ScalarField2D read_snapshot_bin(const std::string& path);

void write_radial_csv(const RadialProfile& f, const std::string& path);

// printf %.17g: 17 significant digits, enough to round-trip a double.
std::string fmt17(double x);

}  // namespace ringburst
