#pragma once

#include "isoremesh/half_edge_mesh.hpp"
#include "isoremesh/remesh_config.hpp"

namespace isoremesh {

// Edit predicates. Pure: the mesh is never mutated and repeated calls agree.
// `edge` is any half-edge of the undirected edge. Throw StaleHandleError on
// dead handles.

// Long-edge trigger plus the obtuse guard: when angle optimization is on, a
// split is blocked if any interior angle of an adjacent face reaches the
// obtuse threshold (conservative superset of the four named angles).
EditDecision should_split(const HalfEdgeMesh& mesh, Index edge, const RemeshConfig& cfg);

// Short-edge trigger guarded by: boundary endpoints, predicted survivor
// degree deg(a)+deg(b)-4 vs max_degree, the link condition, post-collapse
// edge lengths vs the split threshold, and fold-over of incident faces.
EditDecision should_collapse(const HalfEdgeMesh& mesh, Index edge, const RemeshConfig& cfg);

// Interior edges only. Requires a strict decrease of the squared valence
// deviation over the four affected vertices (ideal 6 interior / 4 boundary),
// a pre-flip dihedral angle within dihedral_eps, and (when angle optimization
// is on) no post-flip angle reaching the obtuse threshold.
EditDecision should_flip(const HalfEdgeMesh& mesh, Index edge, const RemeshConfig& cfg);

// Mesh-wide passes. Candidates are scanned in ascending canonical edge-id
// order; decisions are re-evaluated against the current mesh right before
// each edit.
PassStats run_split_pass(HalfEdgeMesh& mesh, const RemeshConfig& cfg);
PassStats run_collapse_pass(HalfEdgeMesh& mesh, const RemeshConfig& cfg);
PassStats run_flip_pass(HalfEdgeMesh& mesh, const RemeshConfig& cfg);

unsigned ideal_valence(const HalfEdgeMesh& mesh, Index v);  // 6 interior, 4 boundary

// Sum over live vertices of (degree - ideal)^2.
double valence_energy(const HalfEdgeMesh& mesh);

}  // namespace isoremesh
