#include "isoremesh/smoothing.hpp"

#include <chrono>
#include <cmath>
#include <vector>

namespace isoremesh {

namespace {

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

// Barycentric vertex area: one third of the incident face areas.
double vertex_area(const HalfEdgeMesh& mesh, Index v) {
    double area = 0.0;
    mesh.for_each_outgoing(v, [&](Index h) { area += mesh.face_area(mesh.face(h)); });
    return area / 3.0;
}

double cot_at(const Vec3& apex, const Vec3& a, const Vec3& b) {
    const Vec3 u = a - apex;
    const Vec3 v = b - apex;
    const double sin_term = norm(cross(u, v));
    if (sin_term <= 0.0) return 0.0;
    return dot(u, v) / sin_term;
}

// Clamped cotangent weight of the edge h = (v -> w).
double cot_weight(const HalfEdgeMesh& mesh, Index h) {
    const Vec3& pv = mesh.position(mesh.origin(h));
    const Vec3& pw = mesh.position(mesh.target(h));
    double w = cot_at(mesh.position(mesh.origin(mesh.prev(h))), pv, pw);
    const Index t = mesh.twin(h);
    if (t != kInvalidIndex) {
        w += cot_at(mesh.position(mesh.origin(mesh.prev(t))), pv, pw);
        w *= 0.5;
    }
    return std::max(w, 0.0);
}

}  // namespace

Vec3 weighted_centroid(const HalfEdgeMesh& mesh, Index v, WeightingScheme scheme) {
    std::vector<Index> ring;       // neighbor vertices
    std::vector<double> weights;

    Index last = kInvalidIndex;
    mesh.for_each_outgoing(v, [&](Index h) {
        ring.push_back(mesh.target(h));
        if (scheme == WeightingScheme::Cotangent) weights.push_back(cot_weight(mesh, h));
        last = h;
    });
    if (last != kInvalidIndex && mesh.twin(mesh.prev(last)) == kInvalidIndex) {
        // Trailing boundary neighbor reached only through an incoming half-edge.
        const Index h_in = mesh.prev(last);
        ring.push_back(mesh.origin(h_in));
        if (scheme == WeightingScheme::Cotangent) weights.push_back(cot_weight(mesh, h_in));
    }
    if (ring.empty()) throw EmptyInputError("weighted_centroid: isolated vertex");

    switch (scheme) {
        case WeightingScheme::Uniform:
            weights.assign(ring.size(), 1.0);
            break;
        case WeightingScheme::Area:
            weights.clear();
            for (Index w : ring) weights.push_back(vertex_area(mesh, w));
            break;
        case WeightingScheme::Cotangent:
            break;  // already gathered per-edge
    }

    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0)) weights.assign(ring.size(), 1.0), total = static_cast<double>(ring.size());

    Vec3 centroid{};
    for (std::size_t i = 0; i < ring.size(); ++i)
        centroid += (weights[i] / total) * mesh.position(ring[i]);
    return centroid;
}

PassStats smooth_pass(HalfEdgeMesh& mesh, const SurfaceCloud* cloud, const RemeshConfig& cfg) {
    const double t0 = now_seconds();
    PassStats st;
    st.kind = PassKind::Smooth;

    const bool use_mls = cfg.mls_enabled && cloud != nullptr;
    const double area_eps = mesh.degenerate_area_threshold();

    // Frozen pre-pass buffer: proposals never see earlier moves.
    const std::vector<Vec3> frozen = mesh.raw_positions();
    std::vector<std::pair<Index, Vec3>> proposals;

    for (Index v = 0; v < mesh.vertex_capacity(); ++v) {
        if (!mesh.vertex_alive(v)) continue;
        if (mesh.outgoing_half_edge(v) == kInvalidIndex) continue;  // isolated
        if (mesh.is_boundary_vertex(v)) continue;

        const Vec3 n = mesh.vertex_normal(v);
        if (norm(n) == 0.0) continue;  // degenerate star, excluded

        ++st.candidates;
        const Vec3& p = frozen[v];
        const Vec3 centroid = weighted_centroid(mesh, v, cfg.weighting);
        const Vec3 offset = centroid - p;
        const Vec3 tangential = offset - dot(n, offset) * n;
        Vec3 proposed = p + cfg.lambda * tangential;

        if (use_mls) {
            try {
                const MlsProjection proj = cloud->project(proposed);
                if (proj.fallback) ++st.mls_fallbacks;
                proposed = proj.position;
            } catch (const OutOfDomainError&) {
                ++st.mls_fallbacks;  // keep the tangent-step position
            }
        }

        bool folds = false;
        mesh.for_each_outgoing(v, [&](Index h) {
            if (folds) return;
            const auto vs = mesh.face_vertices(mesh.face(h));
            Vec3 before[3], after[3];
            for (int i = 0; i < 3; ++i) {
                before[i] = frozen[vs[i]];
                after[i] = vs[i] == v ? proposed : frozen[vs[i]];
            }
            const Vec3 nb = cross(before[1] - before[0], before[2] - before[0]);
            const Vec3 na = cross(after[1] - after[0], after[2] - after[0]);
            if (0.5 * norm(na) < area_eps) folds = true;
            else if (0.5 * norm(nb) >= area_eps && dot(nb, na) <= 0.0) folds = true;
        });
        if (folds) {
            ++st.blocked_by_reason[EditReason::GeometryFold];
            continue;
        }
        ++st.performed;
        if (squared_distance(proposed, p) > 0.0) proposals.emplace_back(v, proposed);
    }

    for (const auto& [v, p] : proposals) mesh.set_position(v, p);

    st.wall_seconds = now_seconds() - t0;
    st.vertices_after = mesh.vertex_count();
    st.edges_after = mesh.edge_count();
    st.faces_after = mesh.face_count();
    return st;
}

}  // namespace isoremesh
