#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "isoremesh/errors.hpp"
#include "isoremesh/vec3.hpp"

namespace isoremesh {

// Handles are plain indices into the element arrays. Deleted elements are
// tombstoned; ids stay stable until compact().
using Index = std::uint32_t;
inline constexpr Index kInvalidIndex = 0xffffffffu;

// twin == kInvalidIndex marks a boundary half-edge (the edge has one face).
struct HalfEdgeRec {
    Index origin = kInvalidIndex;
    Index twin = kInvalidIndex;
    Index next = kInvalidIndex;
    Index face = kInvalidIndex;
};

struct MeshValidationReport {
    bool is_manifold = true;
    std::size_t boundary_edge_count = 0;
    std::vector<std::pair<Index, Index>> non_manifold_edges;  // as vertex pairs
    std::vector<Index> degenerate_faces;
    long long euler_characteristic = 0;  // V - E + F over live elements
    std::vector<std::string> problems;   // audit failures, empty when clean
};

struct NonManifoldError : Error {
    NonManifoldError(const std::string& msg, MeshValidationReport r)
        : Error(msg), report(std::move(r)) {}
    MeshValidationReport report;
};

// Interior angles in radians, matched positionally to face_vertices(f).
using AngleTriple = std::array<double, 3>;

// Manifold (possibly bordered) triangle mesh with half-edge adjacency.
//
// Conventions:
//  - faces are CCW cycles of three half-edges (next^3 == id);
//  - twin(twin(h)) == h for interior half-edges, boundary half-edges have
//    twin == kInvalidIndex;
//  - a boundary vertex's outgoing half-edge is always its unique outgoing
//    boundary half-edge, which makes is_boundary_vertex O(1) and lets the
//    fan walk cover the whole one-ring from that start.
class HalfEdgeMesh {
public:
    // ---- element counts -------------------------------------------------
    std::size_t vertex_count() const { return live_vertices_; }
    std::size_t face_count() const { return live_faces_; }
    std::size_t half_edge_count() const { return live_half_edges_; }
    std::size_t edge_count() const;

    // Id ranges including tombstones; iterate [0, capacity) and skip dead.
    std::size_t vertex_capacity() const { return positions_.size(); }
    std::size_t face_capacity() const { return face_half_edge_.size(); }
    std::size_t half_edge_capacity() const { return half_edges_.size(); }

    bool vertex_alive(Index v) const { return v < v_alive_.size() && v_alive_[v]; }
    bool face_alive(Index f) const { return f < f_alive_.size() && f_alive_[f]; }
    bool half_edge_alive(Index h) const { return h < h_alive_.size() && h_alive_[h]; }

    // ---- geometry --------------------------------------------------------
    const Vec3& position(Index v) const { return positions_[v]; }
    void set_position(Index v, const Vec3& p);
    const std::vector<Vec3>& raw_positions() const { return positions_; }

    // ---- connectivity ------------------------------------------------------
    Index outgoing_half_edge(Index v) const { return vertex_out_[v]; }
    Index origin(Index h) const { return half_edges_[h].origin; }
    Index twin(Index h) const { return half_edges_[h].twin; }
    Index next(Index h) const { return half_edges_[h].next; }
    Index prev(Index h) const { return half_edges_[half_edges_[h].next].next; }
    Index face(Index h) const { return half_edges_[h].face; }
    Index target(Index h) const { return half_edges_[half_edges_[h].next].origin; }
    Index face_half_edge(Index f) const { return face_half_edge_[f]; }
    std::array<Index, 3> face_vertices(Index f) const;
    std::array<Vec3, 3> face_points(Index f) const;

    bool is_boundary_half_edge(Index h) const { return half_edges_[h].twin == kInvalidIndex; }
    bool is_boundary_edge(Index h) const;    // h: any half-edge of the edge
    bool is_boundary_vertex(Index v) const;  // true iff incident to a boundary edge

    // Canonical id for the undirected edge containing h (stable while both
    // half-edges live).
    Index edge_id(Index h) const {
        const Index t = half_edges_[h].twin;
        return (t == kInvalidIndex || h < t) ? h : t;
    }
    // Canonical ids of all live edges, ascending.
    std::vector<Index> edges() const;

    // Visits every outgoing half-edge of v (single fan; v must not be isolated).
    template <typename F>
    void for_each_outgoing(Index v, F&& fn) const {
        const Index h0 = vertex_out_[v];
        if (h0 == kInvalidIndex) return;
        Index h = h0;
        do {
            fn(h);
            const Index t = half_edges_[prev(h)].twin;
            if (t == kInvalidIndex) break;
            h = t;
        } while (h != h0);
    }

    unsigned vertex_degree(Index v) const;  // incident edges, boundary included
    void collect_neighbors(Index v, std::vector<Index>& out) const;

    double edge_length(Index h) const;
    Vec3 edge_midpoint(Index h) const;
    double face_area(Index f) const;
    Vec3 face_normal(Index f) const;  // unit; zero for degenerate faces
    AngleTriple face_angles(Index f) const;
    Vec3 vertex_normal(Index v) const;  // area-weighted; zero for isolated vertices
    double average_edge_length() const;

    std::pair<Vec3, Vec3> bounding_box() const;  // exact over live vertices
    double bounding_box_diagonal() const;
    // Faces below this area are degenerate; based on a monotone (grow-only)
    // bbox so primitives stay O(1).
    double degenerate_area_threshold() const;
    double degenerate_length_threshold() const;

    // ---- topology-editing primitives ----------------------------------------
    // Split edge at p. Interior edge: V+1, E+3, F+2; boundary: V+1, E+2, F+1.
    // Returns the new vertex.
    Index split_edge(Index h, const Vec3& p);

    // Collapse the edge of h into origin(h), moved to p. Interior: V-1, E-3,
    // F-2; boundary edge: V-1, E-2, F-1. Returns the survivor.
    Index collapse_edge(Index h, const Vec3& p);

    // Replace the edge of h by the one joining the two opposite vertices.
    void flip_edge(Index h);

    // Pure feasibility checks shared with the edit predicates.
    bool collapse_topology_ok(Index h) const;
    bool collapse_geometry_ok(Index h, const Vec3& p) const;
    bool flip_topology_ok(Index h) const;

    // ---- maintenance ---------------------------------------------------------
    MeshValidationReport validate() const;

    struct CompactMaps {
        std::vector<Index> vertex_map;  // old id -> new id, kInvalidIndex for dead
        std::vector<Index> face_map;
    };
    CompactMaps compact();

    // Live faces in ascending face-id order (raw vertex ids).
    std::vector<std::array<Index, 3>> face_list() const;

    friend HalfEdgeMesh build_half_edge(const std::vector<Vec3>& positions,
                                        const std::vector<std::array<Index, 3>>& triangles);

private:
    Index alloc_vertex(const Vec3& p);
    Index alloc_half_edge();
    Index alloc_face();
    void kill_vertex(Index v);
    void kill_half_edge(Index h);
    void kill_face(Index f);
    // Re-point v's outgoing half-edge at its boundary outgoing half-edge if one
    // exists; `candidate` must be a live outgoing half-edge of v.
    void fix_vertex_out(Index v, Index candidate);
    void check_half_edge(Index h) const;
    void grow_bbox(const Vec3& p);

    std::vector<Vec3> positions_;
    std::vector<Index> vertex_out_;
    std::vector<HalfEdgeRec> half_edges_;
    std::vector<Index> face_half_edge_;
    std::vector<std::uint8_t> v_alive_, h_alive_, f_alive_;
    std::vector<Index> free_vertices_, free_half_edges_, free_faces_;
    std::size_t live_vertices_ = 0, live_half_edges_ = 0, live_faces_ = 0;

    bool bbox_seeded_ = false;
    Vec3 bbox_min_, bbox_max_;  // monotone, grown on writes; never shrinks
};

// Builds connectivity from an indexed triangle soup. Throws NonManifoldError
// when an edge has more than two faces or a vertex fan is not a single disk,
// OrientationError when windings are inconsistent across an edge.
HalfEdgeMesh build_half_edge(const std::vector<Vec3>& positions,
                             const std::vector<std::array<Index, 3>>& triangles);

MeshValidationReport validate_mesh(const HalfEdgeMesh& mesh);

}  // namespace isoremesh
