#pragma once

#include <iosfwd>
#include <string>

#include "isoremesh/half_edge_mesh.hpp"

namespace isoremesh {

enum class MeshFormat { Obj, Ply };

// Throws IoError for unknown extensions.
MeshFormat format_from_path(const std::string& path);

// OBJ: `v x y z` and `f i j k` (1-based, i/t/n forms accepted, positions only).
// PLY: ascii or binary_little_endian, elements `vertex` (x,y,z) and `face`
// (index list). Polygons are fan-triangulated at their first vertex with a
// warning. Throws ParseError on malformed input, NonManifoldError /
// OrientationError on bad connectivity.
HalfEdgeMesh load_mesh(std::istream& in, MeshFormat format);
HalfEdgeMesh load_mesh_file(const std::string& path);

// Deleted elements are compacted with a stable (ascending-id) reindex map.
// OBJ uses 9 significant digits; PLY is written ascii with double precision.
std::string save_mesh(const HalfEdgeMesh& mesh, MeshFormat format);
void save_mesh(const HalfEdgeMesh& mesh, std::ostream& out, MeshFormat format);
void save_mesh_file(const HalfEdgeMesh& mesh, const std::string& path);

}  // namespace isoremesh
