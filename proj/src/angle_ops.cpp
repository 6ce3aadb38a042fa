#include "isoremesh/angle_ops.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <vector>

namespace isoremesh {

namespace {

constexpr unsigned kSplitGenerationCap = 10;

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

void finish_stats(PassStats& st, const HalfEdgeMesh& mesh, double t0) {
    st.wall_seconds = now_seconds() - t0;
    st.vertices_after = mesh.vertex_count();
    st.edges_after = mesh.edge_count();
    st.faces_after = mesh.face_count();
}

// Largest interior angle of a face; degenerate faces report pi so the obtuse
// guards treat them as worst case.
double max_face_angle(const HalfEdgeMesh& mesh, Index f) {
    if (mesh.face_area(f) < mesh.degenerate_area_threshold()) return radians(180.0);
    const auto p = mesh.face_points(f);
    const double a0 = angle_at(p[1], p[0], p[2]);
    const double a1 = angle_at(p[2], p[1], p[0]);
    const double a2 = angle_at(p[0], p[2], p[1]);
    return std::max({a0, a1, a2});
}

double max_triangle_angle(const Vec3& p0, const Vec3& p1, const Vec3& p2, double area_eps) {
    if (0.5 * norm(cross(p1 - p0, p2 - p0)) < area_eps) return radians(180.0);
    return std::max({angle_at(p1, p0, p2), angle_at(p2, p1, p0), angle_at(p0, p2, p1)});
}

double dihedral_angle(const HalfEdgeMesh& mesh, Index h) {
    const Vec3 n1 = mesh.face_normal(mesh.face(h));
    const Vec3 n2 = mesh.face_normal(mesh.face(mesh.twin(h)));
    double d = dot(n1, n2);
    if (d > 1.0) d = 1.0;
    if (d < -1.0) d = -1.0;
    return std::acos(d);
}

}  // namespace

unsigned ideal_valence(const HalfEdgeMesh& mesh, Index v) {
    return mesh.is_boundary_vertex(v) ? 4u : 6u;
}

double valence_energy(const HalfEdgeMesh& mesh) {
    double e = 0.0;
    for (Index v = 0; v < mesh.vertex_capacity(); ++v) {
        if (!mesh.vertex_alive(v)) continue;
        if (mesh.outgoing_half_edge(v) == kInvalidIndex) continue;
        const double d = static_cast<double>(mesh.vertex_degree(v)) -
                         static_cast<double>(ideal_valence(mesh, v));
        e += d * d;
    }
    return e;
}

// ---------------------------------------------------------------------------
// predicates
// ---------------------------------------------------------------------------

EditDecision should_split(const HalfEdgeMesh& mesh, Index edge, const RemeshConfig& cfg) {
    if (!mesh.half_edge_alive(edge)) throw StaleHandleError("should_split: stale edge handle");
    if (!(mesh.edge_length(edge) > cfg.split_factor * cfg.target_length))
        return EditDecision::block(EditReason::LengthNotTriggered);

    if (cfg.angle_opt_enabled) {
        if (max_face_angle(mesh, mesh.face(edge)) >= cfg.obtuse_threshold)
            return EditDecision::block(EditReason::ObtuseAdjacent);
        const Index t = mesh.twin(edge);
        if (t != kInvalidIndex && max_face_angle(mesh, mesh.face(t)) >= cfg.obtuse_threshold)
            return EditDecision::block(EditReason::ObtuseAdjacent);
    }
    return EditDecision::allow();
}

EditDecision should_collapse(const HalfEdgeMesh& mesh, Index edge, const RemeshConfig& cfg) {
    if (!mesh.half_edge_alive(edge)) throw StaleHandleError("should_collapse: stale edge handle");
    if (!(mesh.edge_length(edge) < cfg.collapse_factor * cfg.target_length))
        return EditDecision::block(EditReason::LengthNotTriggered);

    const Index a = mesh.origin(edge);
    const Index b = mesh.target(edge);
    if (mesh.is_boundary_vertex(a) || mesh.is_boundary_vertex(b))
        return EditDecision::block(EditReason::BoundaryEndpoint);

    // Both endpoints interior, so the edge is interior and the survivor keeps
    // deg(a)+deg(b)-4 edges.
    const unsigned predicted = mesh.vertex_degree(a) + mesh.vertex_degree(b) - 4;
    if (predicted > cfg.max_degree)
        return EditDecision::block(EditReason::DegreeExceeded);

    if (!mesh.collapse_topology_ok(edge))
        return EditDecision::block(EditReason::LinkCondition);

    const Vec3 p = mesh.edge_midpoint(edge);

    // Collapsing must not immediately re-trigger the split pass.
    std::vector<Index> ring;
    for (Index center : {a, b}) {
        mesh.collect_neighbors(center, ring);
        for (Index w : ring) {
            if (w == a || w == b) continue;
            if (distance(p, mesh.position(w)) > cfg.split_factor * cfg.target_length)
                return EditDecision::block(EditReason::LengthNotTriggered);
        }
    }

    if (!mesh.collapse_geometry_ok(edge, p))
        return EditDecision::block(EditReason::GeometryFold);
    return EditDecision::allow();
}

EditDecision should_flip(const HalfEdgeMesh& mesh, Index edge, const RemeshConfig& cfg) {
    if (!mesh.half_edge_alive(edge)) throw StaleHandleError("should_flip: stale edge handle");
    if (!mesh.flip_topology_ok(edge))
        return EditDecision::block(EditReason::TopologyBlocked);

    if (dihedral_angle(mesh, edge) > cfg.dihedral_eps)
        return EditDecision::block(EditReason::DihedralExceeded);

    const Index h1 = edge;
    const Index h4 = mesh.twin(h1);
    const Index a = mesh.origin(h1);
    const Index b = mesh.origin(h4);
    const Index c = mesh.origin(mesh.prev(h1));
    const Index d = mesh.origin(mesh.prev(h4));

    auto sq = [](double x) { return x * x; };
    double before = 0.0, after = 0.0;
    const Index verts[4] = {a, b, c, d};
    const int delta[4] = {-1, -1, +1, +1};
    for (int i = 0; i < 4; ++i) {
        const double ideal = static_cast<double>(ideal_valence(mesh, verts[i]));
        const double deg = static_cast<double>(mesh.vertex_degree(verts[i]));
        before += sq(deg - ideal);
        after += sq(deg + delta[i] - ideal);
    }
    if (!(after < before))
        return EditDecision::block(EditReason::NoValenceGain);

    if (cfg.angle_opt_enabled) {
        const Vec3& pa = mesh.position(a);
        const Vec3& pb = mesh.position(b);
        const Vec3& pc = mesh.position(c);
        const Vec3& pd = mesh.position(d);
        const double eps = mesh.degenerate_area_threshold();
        // Post-flip faces are (a,d,c) and (d,b,c).
        if (max_triangle_angle(pa, pd, pc, eps) >= cfg.obtuse_threshold ||
            max_triangle_angle(pd, pb, pc, eps) >= cfg.obtuse_threshold)
            return EditDecision::block(EditReason::NewObtuse);
    }
    return EditDecision::allow();
}

// ---------------------------------------------------------------------------
// passes
// ---------------------------------------------------------------------------

PassStats run_split_pass(HalfEdgeMesh& mesh, const RemeshConfig& cfg) {
    const double t0 = now_seconds();
    PassStats st;
    st.kind = PassKind::Split;

    const double threshold = cfg.split_factor * cfg.target_length;
    std::deque<std::pair<Index, unsigned>> queue;  // (canonical edge, generation)
    for (Index e : mesh.edges())
        if (mesh.edge_length(e) > threshold) queue.emplace_back(e, 0u);

    while (!queue.empty()) {
        const auto [e, gen] = queue.front();
        queue.pop_front();
        const EditDecision dec = should_split(mesh, e, cfg);
        ++st.candidates;
        if (!dec.allowed) {
            ++st.blocked_by_reason[dec.reason];
            continue;
        }
        Index m;
        try {
            m = mesh.split_edge(e, mesh.edge_midpoint(e));
        } catch (const Error&) {
            ++st.blocked_by_reason[EditReason::GeometryFold];
            continue;
        }
        ++st.performed;
        if (gen + 1 > kSplitGenerationCap) continue;
        // The child edges (including the relabeled halves of e) hang off m.
        mesh.for_each_outgoing(m, [&](Index h) {
            const Index child = mesh.edge_id(h);
            if (mesh.edge_length(child) > threshold) queue.emplace_back(child, gen + 1);
        });
    }
    finish_stats(st, mesh, t0);
    return st;
}

namespace {

struct EdgeCandidate {
    Index edge;
    Index a, b;
};

bool stale(const HalfEdgeMesh& mesh, const EdgeCandidate& c) {
    if (!mesh.half_edge_alive(c.edge)) return true;
    const Index a = mesh.origin(c.edge);
    const Index b = mesh.target(c.edge);
    return !((a == c.a && b == c.b) || (a == c.b && b == c.a));
}

}  // namespace

PassStats run_collapse_pass(HalfEdgeMesh& mesh, const RemeshConfig& cfg) {
    const double t0 = now_seconds();
    PassStats st;
    st.kind = PassKind::Collapse;

    const double threshold = cfg.collapse_factor * cfg.target_length;
    std::vector<EdgeCandidate> candidates;
    for (Index e : mesh.edges())
        if (mesh.edge_length(e) < threshold) candidates.push_back({e, mesh.origin(e), mesh.target(e)});

    for (const EdgeCandidate& c : candidates) {
        if (stale(mesh, c)) continue;
        const EditDecision dec = should_collapse(mesh, c.edge, cfg);
        ++st.candidates;
        if (!dec.allowed) {
            ++st.blocked_by_reason[dec.reason];
            continue;
        }
        try {
            const Index survivor = mesh.collapse_edge(c.edge, mesh.edge_midpoint(c.edge));
            st.collapse_survivors.push_back(survivor);
            ++st.performed;
        } catch (const BlockedTopologyError&) {
            ++st.blocked_by_reason[EditReason::LinkCondition];
        } catch (const Error&) {
            ++st.blocked_by_reason[EditReason::GeometryFold];
        }
    }
    finish_stats(st, mesh, t0);
    return st;
}

PassStats run_flip_pass(HalfEdgeMesh& mesh, const RemeshConfig& cfg) {
    const double t0 = now_seconds();
    PassStats st;
    st.kind = PassKind::Flip;

    std::vector<EdgeCandidate> candidates;
    for (Index e : mesh.edges())
        if (!mesh.is_boundary_edge(e)) candidates.push_back({e, mesh.origin(e), mesh.target(e)});

    for (const EdgeCandidate& c : candidates) {
        if (stale(mesh, c)) continue;
        const EditDecision dec = should_flip(mesh, c.edge, cfg);
        ++st.candidates;
        if (!dec.allowed) {
            ++st.blocked_by_reason[dec.reason];
            continue;
        }
        try {
            mesh.flip_edge(c.edge);
            ++st.performed;
        } catch (const Error&) {
            ++st.blocked_by_reason[EditReason::TopologyBlocked];
        }
    }
    finish_stats(st, mesh, t0);
    return st;
}

}  // namespace isoremesh
