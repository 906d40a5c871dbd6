#pragma once

// Plain-text field snapshots:
//
//   torus n=<n> axes=<p1,...,p2n> periods=<L1,...,L2n>
//   <value of node 0>
//   <value of node 1>
//   ...
//
// Nodes are in row-major order, values printed with 17 significant digits so
// that reading a snapshot back reproduces every double exactly.

#include <filesystem>
#include <iosfwd>

#include "chernflow/torus.hpp"

namespace chernflow {

void write_snapshot(std::ostream& os, const ScalarField& field);
// Throws Error(BadSnapshot) on malformed input; grid validation errors propagate.
ScalarField read_snapshot(std::istream& is);

void save_snapshot(const std::filesystem::path& path, const ScalarField& field);
ScalarField load_snapshot(const std::filesystem::path& path);

}  // namespace chernflow
