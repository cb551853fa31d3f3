// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <liftfem/mesh.hpp>

#include <iosfwd>

namespace liftfem {

// Plain-text curved mesh format:
//
//   order r  nv NV  nt NT
//   x y                         (NV lines, 17 significant digits)
//   i_0 ... i_{m-1}             (NT lines, m = (r+1)(r+2)/2, lattice order)
//   boundary NB
//   element local_edge          (NB lines)
//
// The first three indices of an element line are its vertices.

void write_mesh(std::ostream& out, const CurvedMesh& mesh);

/// Throws std::runtime_error on malformed input.
CurvedMesh read_mesh(std::istream& in);

} // namespace liftfem
