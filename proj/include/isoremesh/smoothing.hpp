#pragma once

#include "isoremesh/half_edge_mesh.hpp"
#include "isoremesh/remesh_config.hpp"
#include "isoremesh/surface_cloud.hpp"

namespace isoremesh {

// Normalized one-ring centroid of v under the given weighting. Throws
// EmptyInputError for isolated vertices.
Vec3 weighted_centroid(const HalfEdgeMesh& mesh, Index v, WeightingScheme scheme);

// One tangential relaxation sweep (Jacobi semantics: all proposals are
// computed against the pre-pass vertex buffer, then applied). Interior
// vertices move by lambda times the tangential part of the centroid offset,
// then project onto `cloud` when cfg.mls_enabled and cloud != nullptr.
// Boundary vertices never move; moves that would fold or degenerate an
// incident face are rejected.
PassStats smooth_pass(HalfEdgeMesh& mesh, const SurfaceCloud* cloud, const RemeshConfig& cfg);

}  // namespace isoremesh
