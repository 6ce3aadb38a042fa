#include "isoremesh/half_edge_mesh.hpp"

#include <algorithm>
#include <cstdio>
#include <unordered_map>

namespace isoremesh {

namespace {

inline std::uint64_t directed_key(Index u, Index v) {
    return (static_cast<std::uint64_t>(u) << 32) | v;
}

}  // namespace

// ---------------------------------------------------------------------------
// allocation / tombstones
// ---------------------------------------------------------------------------

Index HalfEdgeMesh::alloc_vertex(const Vec3& p) {
    const Index v = static_cast<Index>(positions_.size());
    positions_.push_back(p);
    vertex_out_.push_back(kInvalidIndex);
    v_alive_.push_back(1);
    ++live_vertices_;
    grow_bbox(p);
    return v;
}

Index HalfEdgeMesh::alloc_half_edge() {
    const Index h = static_cast<Index>(half_edges_.size());
    half_edges_.push_back({});
    h_alive_.push_back(1);
    ++live_half_edges_;
    return h;
}

Index HalfEdgeMesh::alloc_face() {
    const Index f = static_cast<Index>(face_half_edge_.size());
    face_half_edge_.push_back(kInvalidIndex);
    f_alive_.push_back(1);
    ++live_faces_;
    return f;
}

void HalfEdgeMesh::kill_vertex(Index v) {
    v_alive_[v] = 0;
    vertex_out_[v] = kInvalidIndex;
    free_vertices_.push_back(v);
    --live_vertices_;
}

void HalfEdgeMesh::kill_half_edge(Index h) {
    h_alive_[h] = 0;
    half_edges_[h] = {};
    free_half_edges_.push_back(h);
    --live_half_edges_;
}

void HalfEdgeMesh::kill_face(Index f) {
    f_alive_[f] = 0;
    face_half_edge_[f] = kInvalidIndex;
    free_faces_.push_back(f);
    --live_faces_;
}

void HalfEdgeMesh::grow_bbox(const Vec3& p) {
    if (!bbox_seeded_) {
        bbox_min_ = bbox_max_ = p;
        bbox_seeded_ = true;
        return;
    }
    bbox_min_.x = std::min(bbox_min_.x, p.x);
    bbox_min_.y = std::min(bbox_min_.y, p.y);
    bbox_min_.z = std::min(bbox_min_.z, p.z);
    bbox_max_.x = std::max(bbox_max_.x, p.x);
    bbox_max_.y = std::max(bbox_max_.y, p.y);
    bbox_max_.z = std::max(bbox_max_.z, p.z);
}

void HalfEdgeMesh::set_position(Index v, const Vec3& p) {
    positions_[v] = p;
    grow_bbox(p);
}

void HalfEdgeMesh::check_half_edge(Index h) const {
    if (!half_edge_alive(h)) throw StaleHandleError("stale half-edge handle " + std::to_string(h));
}

// ---------------------------------------------------------------------------
// queries
// ---------------------------------------------------------------------------

std::size_t HalfEdgeMesh::edge_count() const {
    std::size_t boundary = 0, interior = 0;
    for (Index h = 0; h < half_edges_.size(); ++h) {
        if (!h_alive_[h]) continue;
        if (half_edges_[h].twin == kInvalidIndex) ++boundary;
        else ++interior;
    }
    return boundary + interior / 2;
}

std::array<Index, 3> HalfEdgeMesh::face_vertices(Index f) const {
    const Index h0 = face_half_edge_[f];
    const Index h1 = half_edges_[h0].next;
    const Index h2 = half_edges_[h1].next;
    return {half_edges_[h0].origin, half_edges_[h1].origin, half_edges_[h2].origin};
}

std::array<Vec3, 3> HalfEdgeMesh::face_points(Index f) const {
    const auto v = face_vertices(f);
    return {positions_[v[0]], positions_[v[1]], positions_[v[2]]};
}

bool HalfEdgeMesh::is_boundary_edge(Index h) const {
    check_half_edge(h);
    return half_edges_[h].twin == kInvalidIndex;
}

bool HalfEdgeMesh::is_boundary_vertex(Index v) const {
    if (!vertex_alive(v)) throw StaleHandleError("stale vertex handle " + std::to_string(v));
    const Index h = vertex_out_[v];
    if (h == kInvalidIndex) return false;  // isolated
    return half_edges_[h].twin == kInvalidIndex;
}

std::vector<Index> HalfEdgeMesh::edges() const {
    std::vector<Index> out;
    out.reserve(half_edges_.size() / 2 + 1);
    for (Index h = 0; h < half_edges_.size(); ++h) {
        if (!h_alive_[h]) continue;
        const Index t = half_edges_[h].twin;
        if (t == kInvalidIndex || h < t) out.push_back(h);
    }
    return out;
}

unsigned HalfEdgeMesh::vertex_degree(Index v) const {
    if (!vertex_alive(v)) throw StaleHandleError("stale vertex handle " + std::to_string(v));
    unsigned deg = 0;
    Index last = kInvalidIndex;
    for_each_outgoing(v, [&](Index h) {
        ++deg;
        last = h;
    });
    if (deg == 0) return 0;
    if (half_edges_[prev(last)].twin == kInvalidIndex) ++deg;  // trailing boundary edge, incoming only
    return deg;
}

void HalfEdgeMesh::collect_neighbors(Index v, std::vector<Index>& out) const {
    out.clear();
    Index last = kInvalidIndex;
    for_each_outgoing(v, [&](Index h) {
        out.push_back(target(h));
        last = h;
    });
    if (last != kInvalidIndex && half_edges_[prev(last)].twin == kInvalidIndex)
        out.push_back(half_edges_[prev(last)].origin);
}

double HalfEdgeMesh::edge_length(Index h) const {
    return distance(positions_[origin(h)], positions_[target(h)]);
}

Vec3 HalfEdgeMesh::edge_midpoint(Index h) const {
    return midpoint(positions_[origin(h)], positions_[target(h)]);
}

double HalfEdgeMesh::face_area(Index f) const {
    const auto p = face_points(f);
    return 0.5 * norm(cross(p[1] - p[0], p[2] - p[0]));
}

Vec3 HalfEdgeMesh::face_normal(Index f) const {
    const auto p = face_points(f);
    return normalized(cross(p[1] - p[0], p[2] - p[0]));
}

AngleTriple HalfEdgeMesh::face_angles(Index f) const {
    if (face_area(f) < degenerate_area_threshold())
        throw DegenerateGeometryError("face " + std::to_string(f) + " is degenerate");
    const auto p = face_points(f);
    return {angle_at(p[1], p[0], p[2]), angle_at(p[2], p[1], p[0]), angle_at(p[0], p[2], p[1])};
}

Vec3 HalfEdgeMesh::vertex_normal(Index v) const {
    Vec3 acc{};
    for_each_outgoing(v, [&](Index h) {
        const auto p = face_points(half_edges_[h].face);
        acc += cross(p[1] - p[0], p[2] - p[0]);  // 2*area*unit normal
    });
    return normalized(acc);
}

double HalfEdgeMesh::average_edge_length() const {
    double sum = 0.0;
    std::size_t count = 0;
    for (Index h = 0; h < half_edges_.size(); ++h) {
        if (!h_alive_[h]) continue;
        const Index t = half_edges_[h].twin;
        if (t == kInvalidIndex || h < t) {
            sum += edge_length(h);
            ++count;
        }
    }
    if (count == 0) throw EmptyInputError("mesh has no edges");
    return sum / static_cast<double>(count);
}

std::pair<Vec3, Vec3> HalfEdgeMesh::bounding_box() const {
    Vec3 lo{}, hi{};
    bool seeded = false;
    for (Index v = 0; v < positions_.size(); ++v) {
        if (!v_alive_[v]) continue;
        const Vec3& p = positions_[v];
        if (!seeded) {
            lo = hi = p;
            seeded = true;
            continue;
        }
        lo.x = std::min(lo.x, p.x); lo.y = std::min(lo.y, p.y); lo.z = std::min(lo.z, p.z);
        hi.x = std::max(hi.x, p.x); hi.y = std::max(hi.y, p.y); hi.z = std::max(hi.z, p.z);
    }
    return {lo, hi};
}

double HalfEdgeMesh::bounding_box_diagonal() const {
    const auto [lo, hi] = bounding_box();
    return distance(lo, hi);
}

double HalfEdgeMesh::degenerate_area_threshold() const {
    if (!bbox_seeded_) return 0.0;
    return 1e-12 * squared_distance(bbox_min_, bbox_max_);
}

double HalfEdgeMesh::degenerate_length_threshold() const {
    if (!bbox_seeded_) return 0.0;
    return 1e-6 * distance(bbox_min_, bbox_max_);
}

// ---------------------------------------------------------------------------
// split
// ---------------------------------------------------------------------------

Index HalfEdgeMesh::split_edge(Index h, const Vec3& p) {
    check_half_edge(h);
    if (!is_finite(p)) throw DegenerateGeometryError("split position is not finite");

    const Index h1 = h;
    const Index a = origin(h1);
    const Index b = target(h1);
    const double lt = degenerate_length_threshold();
    if (distance(p, positions_[a]) <= lt || distance(p, positions_[b]) <= lt)
        throw DegenerateGeometryError("split position coincides with an endpoint");

    const Index h2 = next(h1);
    const Index h3 = next(h2);
    const Index c = origin(h3);
    const Index f1 = face(h1);
    const Index h4 = twin(h1);

    const Index m = alloc_vertex(p);

    // f1 shrinks to (a,m,c); new face f3 = (m,b,c).
    const Index hmc = alloc_half_edge();
    const Index hcm = alloc_half_edge();
    const Index hmb = alloc_half_edge();
    const Index f3 = alloc_face();

    half_edges_[h1].next = hmc;
    half_edges_[hmc] = {m, hcm, h3, f1};
    face_half_edge_[f1] = h1;

    half_edges_[hmb] = {m, kInvalidIndex, h2, f3};
    half_edges_[h2].next = hcm;
    half_edges_[h2].face = f3;
    half_edges_[hcm] = {c, hmc, hmb, f3};
    face_half_edge_[f3] = hmb;

    if (h4 == kInvalidIndex) {
        // Boundary edge: (a,m) keeps h1's invalid twin, (m,b) is boundary too.
        vertex_out_[m] = hmb;  // boundary-vertex convention
        return m;
    }

    const Index h5 = next(h4);
    const Index h6 = next(h5);
    const Index d = origin(h6);
    const Index f2 = face(h4);

    // f2 shrinks to (m,a,d); new face f4 = (b,m,d).
    const Index hdm = alloc_half_edge();
    const Index hbm = alloc_half_edge();
    const Index hmd = alloc_half_edge();
    const Index f4 = alloc_face();

    half_edges_[h4].origin = m;  // h1/h4 stay twins as (a->m)/(m->a)
    half_edges_[h5].next = hdm;
    half_edges_[hdm] = {d, hmd, h4, f2};
    face_half_edge_[f2] = h4;

    half_edges_[hbm] = {b, hmb, hmd, f4};
    half_edges_[hmd] = {m, hdm, h6, f4};
    half_edges_[h6].next = hbm;
    half_edges_[h6].face = f4;
    face_half_edge_[f4] = hbm;

    half_edges_[hmb].twin = hbm;

    if (vertex_out_[b] == h4) vertex_out_[b] = hbm;  // h4 no longer leaves b
    vertex_out_[m] = hmb;
    return m;
}

// ---------------------------------------------------------------------------
// collapse
// ---------------------------------------------------------------------------

bool HalfEdgeMesh::collapse_topology_ok(Index h) const {
    if (!half_edge_alive(h)) return false;
    const Index h1 = h;
    const Index a = origin(h1);
    const Index b = target(h1);
    const Index h2 = next(h1);
    const Index h3 = next(h2);
    const Index c = origin(h3);
    const Index h4 = twin(h1);
    const bool interior = h4 != kInvalidIndex;

    // A face whose two remaining edges are both boundary would leave its
    // opposite vertex dangling.
    if (twin(h2) == kInvalidIndex && twin(h3) == kInvalidIndex) return false;

    Index d = kInvalidIndex;
    if (interior) {
        const Index h5 = next(h4);
        const Index h6 = next(h5);
        d = origin(h6);
        if (twin(h5) == kInvalidIndex && twin(h6) == kInvalidIndex) return false;
        if (c == d) return false;
        // Collapsing an interior edge whose endpoints both lie on the boundary
        // pinches the surface.
        if (is_boundary_vertex(a) && is_boundary_vertex(b)) return false;
    }

    // Link condition: the rings of a and b may share only the opposite
    // vertices (one for a boundary edge).
    std::vector<Index> na, nb;
    collect_neighbors(a, na);
    collect_neighbors(b, nb);
    std::sort(na.begin(), na.end());
    std::sort(nb.begin(), nb.end());
    std::vector<Index> common;
    std::set_intersection(na.begin(), na.end(), nb.begin(), nb.end(), std::back_inserter(common));

    if (interior) {
        if (common.size() != 2) return false;
        const Index lo = std::min(c, d), hi = std::max(c, d);
        if (common[0] != lo || common[1] != hi) return false;
    } else {
        if (common.size() != 1 || common[0] != c) return false;
    }
    return true;
}

bool HalfEdgeMesh::collapse_geometry_ok(Index h, const Vec3& p) const {
    if (!half_edge_alive(h)) return false;
    const Index h1 = h;
    const Index a = origin(h1);
    const Index b = target(h1);
    const Index f1 = face(h1);
    const Index h4 = twin(h1);
    const Index f2 = h4 == kInvalidIndex ? kInvalidIndex : face(h4);

    const double area_eps = degenerate_area_threshold();
    const double len_eps = degenerate_length_threshold();

    bool ok = true;
    auto check_ring = [&](Index center) {
        for_each_outgoing(center, [&](Index he) {
            if (!ok) return;
            const Index f = face(he);
            if (f == f1 || f == f2) return;
            auto pts = face_points(f);
            const Vec3 n_before = cross(pts[1] - pts[0], pts[2] - pts[0]);
            const auto vs = face_vertices(f);
            for (int i = 0; i < 3; ++i)
                if (vs[i] == a || vs[i] == b) pts[i] = p;
            const Vec3 n_after = cross(pts[1] - pts[0], pts[2] - pts[0]);
            if (0.5 * norm(n_after) < area_eps) ok = false;           // degenerate result
            else if (0.5 * norm(n_before) >= area_eps && dot(n_before, n_after) <= 0.0)
                ok = false;                                           // folded over
        });
        if (!ok) return;
        // New edges out of the survivor must not be zero length.
        std::vector<Index> ring;
        collect_neighbors(center, ring);
        for (Index w : ring) {
            if (w == a || w == b) continue;
            if (distance(p, positions_[w]) <= len_eps) { ok = false; break; }
        }
    };
    check_ring(a);
    if (ok) check_ring(b);
    return ok;
}

Index HalfEdgeMesh::collapse_edge(Index h, const Vec3& p) {
    check_half_edge(h);
    if (!collapse_topology_ok(h))
        throw BlockedTopologyError("collapse would violate the link condition");
    if (!collapse_geometry_ok(h, p))
        throw BlockedGeometryError("collapse would fold or degenerate incident faces");

    const Index h1 = h;
    const Index a = origin(h1);
    const Index b = target(h1);
    const Index h2 = next(h1);
    const Index h3 = next(h2);
    const Index t2 = twin(h2);
    const Index t3 = twin(h3);
    const Index h4 = twin(h1);
    const bool interior = h4 != kInvalidIndex;

    Index h5 = kInvalidIndex, h6 = kInvalidIndex, t5 = kInvalidIndex, t6 = kInvalidIndex;
    Index c = origin(h3), d = kInvalidIndex;
    if (interior) {
        h5 = next(h4);
        h6 = next(h5);
        d = origin(h6);
        t5 = twin(h5);
        t6 = twin(h6);
    }

    std::vector<Index> b_out;
    for_each_outgoing(b, [&](Index he) { b_out.push_back(he); });

    // Merge the paired edges around the dying faces.
    if (t2 != kInvalidIndex) half_edges_[t2].twin = t3;
    if (t3 != kInvalidIndex) half_edges_[t3].twin = t2;
    if (interior) {
        if (t5 != kInvalidIndex) half_edges_[t5].twin = t6;
        if (t6 != kInvalidIndex) half_edges_[t6].twin = t5;
    }

    for (Index he : b_out) half_edges_[he].origin = a;

    kill_face(face(h1));
    kill_half_edge(h1);
    kill_half_edge(h2);
    kill_half_edge(h3);
    if (interior) {
        kill_face(face(h4));
        kill_half_edge(h4);
        kill_half_edge(h5);
        kill_half_edge(h6);
    }
    kill_vertex(b);
    set_position(a, p);

    // Restore outgoing half-edges (and the boundary convention) for the
    // touched vertices.
    Index a_candidate = kInvalidIndex;
    if (t3 != kInvalidIndex) a_candidate = t3;  // a->c
    else if (t6 != kInvalidIndex) a_candidate = t6;  // was b->d, relabeled a->d
    else {
        const Index cur = vertex_out_[a];
        if (cur != kInvalidIndex && h_alive_[cur] && half_edges_[cur].origin == a) a_candidate = cur;
        for (Index he : b_out)
            if (a_candidate == kInvalidIndex && h_alive_[he]) a_candidate = he;
    }
    fix_vertex_out(a, a_candidate);

    Index c_candidate = vertex_out_[c];
    if (c_candidate == kInvalidIndex || !h_alive_[c_candidate] || half_edges_[c_candidate].origin != c)
        c_candidate = t2 != kInvalidIndex ? t2 : next(t3);
    fix_vertex_out(c, c_candidate);

    if (interior) {
        Index d_candidate = vertex_out_[d];
        if (d_candidate == kInvalidIndex || !h_alive_[d_candidate] || half_edges_[d_candidate].origin != d)
            d_candidate = t5 != kInvalidIndex ? t5 : next(t6);
        fix_vertex_out(d, d_candidate);
    }
    return a;
}

void HalfEdgeMesh::fix_vertex_out(Index v, Index candidate) {
    vertex_out_[v] = candidate;
    if (candidate == kInvalidIndex) return;
    Index h = candidate;
    do {
        if (half_edges_[h].twin == kInvalidIndex) {
            vertex_out_[v] = h;
            return;
        }
        h = next(half_edges_[h].twin);
    } while (h != candidate);
}

// ---------------------------------------------------------------------------
// flip
// ---------------------------------------------------------------------------

bool HalfEdgeMesh::flip_topology_ok(Index h) const {
    if (!half_edge_alive(h)) return false;
    if (twin(h) == kInvalidIndex) return false;  // boundary edge
    const Index h1 = h;
    const Index h4 = twin(h1);
    const Index c = origin(prev(h1));
    const Index d = origin(prev(h4));
    if (c == d) return false;
    // Opposite vertices must not already share an edge.
    std::vector<Index> nc;
    collect_neighbors(c, nc);
    return std::find(nc.begin(), nc.end(), d) == nc.end();
}

void HalfEdgeMesh::flip_edge(Index h) {
    check_half_edge(h);
    if (!flip_topology_ok(h))
        throw BlockedTopologyError("flip blocked: boundary edge or opposite vertices already adjacent");

    const Index h1 = h;
    const Index h4 = twin(h1);
    const Index h2 = next(h1);   // b->c
    const Index h3 = next(h2);   // c->a
    const Index h5 = next(h4);   // a->d
    const Index h6 = next(h5);   // d->b
    const Index a = origin(h1);
    const Index b = origin(h4);
    const Index c = origin(h3);
    const Index d = origin(h6);
    const Index f1 = face(h1);
    const Index f2 = face(h4);

    // f1 becomes (a,d,c), f2 becomes (d,b,c); h1/h4 now run d->c / c->d.
    half_edges_[h1].origin = d;
    half_edges_[h4].origin = c;

    half_edges_[h5].next = h1;
    half_edges_[h5].face = f1;
    half_edges_[h1].next = h3;
    half_edges_[h3].next = h5;
    face_half_edge_[f1] = h1;

    half_edges_[h6].next = h2;
    half_edges_[h6].face = f2;
    half_edges_[h2].next = h4;
    half_edges_[h2].face = f2;
    half_edges_[h4].next = h6;
    face_half_edge_[f2] = h4;

    if (vertex_out_[a] == h1) vertex_out_[a] = h5;
    if (vertex_out_[b] == h4) vertex_out_[b] = h2;
}

// ---------------------------------------------------------------------------
// build
// ---------------------------------------------------------------------------

HalfEdgeMesh build_half_edge(const std::vector<Vec3>& positions,
                             const std::vector<std::array<Index, 3>>& triangles) {
    HalfEdgeMesh m;
    m.positions_ = positions;
    m.vertex_out_.assign(positions.size(), kInvalidIndex);
    m.v_alive_.assign(positions.size(), 1);
    m.live_vertices_ = positions.size();
    for (const Vec3& p : positions) m.grow_bbox(p);

    m.half_edges_.reserve(triangles.size() * 3);
    m.face_half_edge_.reserve(triangles.size());

    std::unordered_map<std::uint64_t, Index> directed;  // (u->v) -> half-edge
    directed.reserve(triangles.size() * 3 * 2);

    auto report_for = [&](Index u, Index v) {
        MeshValidationReport r;
        r.is_manifold = false;
        r.non_manifold_edges.emplace_back(std::min(u, v), std::max(u, v));
        return r;
    };

    for (std::size_t t = 0; t < triangles.size(); ++t) {
        const auto& tri = triangles[t];
        for (int i = 0; i < 3; ++i) {
            if (tri[i] >= positions.size())
                throw Error("face " + std::to_string(t) + " references vertex " +
                            std::to_string(tri[i]) + " out of range");
        }
        if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
            throw DegenerateGeometryError("face " + std::to_string(t) + " repeats a vertex");

        const Index f = m.alloc_face();
        const Index h0 = m.alloc_half_edge();
        const Index h1 = m.alloc_half_edge();
        const Index h2 = m.alloc_half_edge();
        const Index hs[3] = {h0, h1, h2};
        for (int i = 0; i < 3; ++i) {
            m.half_edges_[hs[i]].origin = tri[i];
            m.half_edges_[hs[i]].next = hs[(i + 1) % 3];
            m.half_edges_[hs[i]].face = f;
        }
        m.face_half_edge_[f] = h0;

        for (int i = 0; i < 3; ++i) {
            const Index u = tri[i], v = tri[(i + 1) % 3];
            const auto key = directed_key(u, v);
            if (directed.count(key)) {
                if (directed.count(directed_key(v, u)))
                    throw NonManifoldError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                                               ") is shared by more than two faces",
                                           report_for(u, v));
                throw OrientationError("inconsistent winding: directed edge (" + std::to_string(u) +
                                       "," + std::to_string(v) + ") appears twice");
            }
            directed.emplace(key, hs[i]);
        }
    }

    // Twin pairing by the reverse directed edge.
    for (Index h = 0; h < m.half_edges_.size(); ++h) {
        const Index u = m.half_edges_[h].origin;
        const Index v = m.half_edges_[m.half_edges_[h].next].origin;
        const auto it = directed.find(directed_key(v, u));
        m.half_edges_[h].twin = it == directed.end() ? kInvalidIndex : it->second;
    }

    // Outgoing half-edges; boundary vertices must point at their unique
    // outgoing boundary half-edge.
    for (Index h = 0; h < m.half_edges_.size(); ++h) {
        const Index v = m.half_edges_[h].origin;
        if (m.vertex_out_[v] == kInvalidIndex) m.vertex_out_[v] = h;
    }
    std::vector<std::uint8_t> has_boundary_out(positions.size(), 0);
    for (Index h = 0; h < m.half_edges_.size(); ++h) {
        if (m.half_edges_[h].twin != kInvalidIndex) continue;
        const Index v = m.half_edges_[h].origin;
        if (has_boundary_out[v]) {
            MeshValidationReport r;
            r.is_manifold = false;
            r.problems.push_back("vertex " + std::to_string(v) + " has multiple boundary fans");
            throw NonManifoldError("vertex " + std::to_string(v) + " is non-manifold (multiple boundary fans)",
                                   std::move(r));
        }
        has_boundary_out[v] = 1;
        m.vertex_out_[v] = h;
    }

    // Fan audit: every outgoing half-edge must be reachable from vertex_out_.
    std::vector<Index> out_count(positions.size(), 0);
    for (Index h = 0; h < m.half_edges_.size(); ++h) ++out_count[m.half_edges_[h].origin];
    for (Index v = 0; v < positions.size(); ++v) {
        Index seen = 0;
        m.for_each_outgoing(v, [&](Index) { ++seen; });
        if (seen != out_count[v]) {
            MeshValidationReport r;
            r.is_manifold = false;
            r.problems.push_back("vertex " + std::to_string(v) + " fan is not a single disk");
            throw NonManifoldError("vertex " + std::to_string(v) + " is non-manifold (split fan)",
                                   std::move(r));
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// validation
// ---------------------------------------------------------------------------

MeshValidationReport HalfEdgeMesh::validate() const {
    MeshValidationReport r;
    auto flag = [&](std::string msg) {
        r.is_manifold = false;
        r.problems.push_back(std::move(msg));
    };

    std::unordered_map<std::uint64_t, int> directed;
    std::size_t boundary = 0;

    for (Index h = 0; h < half_edges_.size(); ++h) {
        if (!h_alive_[h]) continue;
        const HalfEdgeRec& rec = half_edges_[h];
        if (!vertex_alive(rec.origin)) { flag("half-edge " + std::to_string(h) + " has a dead origin"); continue; }
        if (!face_alive(rec.face)) { flag("half-edge " + std::to_string(h) + " has a dead face"); continue; }
        if (!half_edge_alive(rec.next)) { flag("half-edge " + std::to_string(h) + " has a dead next"); continue; }
        if (next(next(next(h))) != h) flag("half-edge " + std::to_string(h) + " is not in a 3-cycle");
        if (face(next(h)) != rec.face) flag("half-edge " + std::to_string(h) + " next crosses faces");
        if (rec.twin != kInvalidIndex) {
            if (!half_edge_alive(rec.twin)) flag("half-edge " + std::to_string(h) + " has a dead twin");
            else {
                if (twin(rec.twin) != h) flag("twin involution broken at half-edge " + std::to_string(h));
                if (origin(rec.twin) != target(h)) flag("twin endpoints mismatch at half-edge " + std::to_string(h));
            }
        } else {
            ++boundary;
        }
        const auto key = directed_key(rec.origin, target(h));
        if (++directed[key] > 1) {
            r.non_manifold_edges.emplace_back(std::min(rec.origin, target(h)),
                                              std::max(rec.origin, target(h)));
            flag("duplicate directed edge");
        }
    }
    r.boundary_edge_count = boundary;

    const double area_eps = [&] {
        const auto [lo, hi] = bounding_box();
        return 1e-12 * squared_distance(lo, hi);
    }();

    for (Index f = 0; f < face_half_edge_.size(); ++f) {
        if (!f_alive_[f]) continue;
        const Index h0 = face_half_edge_[f];
        if (!half_edge_alive(h0) || face(h0) != f) { flag("face " + std::to_string(f) + " anchor broken"); continue; }
        const auto v = face_vertices(f);
        if (v[0] == v[1] || v[1] == v[2] || v[0] == v[2])
            flag("face " + std::to_string(f) + " repeats a vertex");
        else if (face_area(f) < area_eps)
            r.degenerate_faces.push_back(f);
    }

    std::vector<Index> out_count(positions_.size(), 0);
    for (Index h = 0; h < half_edges_.size(); ++h)
        if (h_alive_[h]) ++out_count[half_edges_[h].origin];
    for (Index v = 0; v < positions_.size(); ++v) {
        if (!v_alive_[v]) continue;
        const Index h0 = vertex_out_[v];
        if (h0 == kInvalidIndex) {
            if (out_count[v] != 0) flag("vertex " + std::to_string(v) + " marked isolated but has half-edges");
            continue;
        }
        if (!half_edge_alive(h0) || origin(h0) != v) {
            flag("vertex " + std::to_string(v) + " outgoing half-edge broken");
            continue;
        }
        Index seen = 0;
        bool has_boundary_out = false;
        Index hh = h0;
        const Index guard = static_cast<Index>(live_half_edges_) + 1;
        do {
            ++seen;
            if (seen > guard) { flag("vertex " + std::to_string(v) + " fan does not terminate"); break; }
            if (half_edges_[hh].twin == kInvalidIndex) has_boundary_out = true;
            const Index t = half_edges_[prev(hh)].twin;
            if (t == kInvalidIndex) break;
            hh = t;
        } while (hh != h0);
        if (seen != out_count[v])
            flag("vertex " + std::to_string(v) + " fan is not a single disk");
        if (has_boundary_out && half_edges_[h0].twin != kInvalidIndex)
            flag("vertex " + std::to_string(v) + " boundary convention broken");
    }

    r.euler_characteristic = static_cast<long long>(live_vertices_) -
                             static_cast<long long>(edge_count()) +
                             static_cast<long long>(live_faces_);
    return r;
}

MeshValidationReport validate_mesh(const HalfEdgeMesh& mesh) { return mesh.validate(); }

// ---------------------------------------------------------------------------
// compaction
// ---------------------------------------------------------------------------

HalfEdgeMesh::CompactMaps HalfEdgeMesh::compact() {
    CompactMaps maps;
    maps.vertex_map.assign(positions_.size(), kInvalidIndex);
    maps.face_map.assign(face_half_edge_.size(), kInvalidIndex);
    std::vector<Index> he_map(half_edges_.size(), kInvalidIndex);

    Index nv = 0, nf = 0, nh = 0;
    for (Index v = 0; v < positions_.size(); ++v)
        if (v_alive_[v]) maps.vertex_map[v] = nv++;
    for (Index f = 0; f < face_half_edge_.size(); ++f)
        if (f_alive_[f]) maps.face_map[f] = nf++;
    for (Index h = 0; h < half_edges_.size(); ++h)
        if (h_alive_[h]) he_map[h] = nh++;

    std::vector<Vec3> positions(nv);
    std::vector<Index> vertex_out(nv);
    std::vector<HalfEdgeRec> hes(nh);
    std::vector<Index> face_he(nf);

    for (Index v = 0; v < positions_.size(); ++v) {
        if (!v_alive_[v]) continue;
        positions[maps.vertex_map[v]] = positions_[v];
        const Index o = vertex_out_[v];
        vertex_out[maps.vertex_map[v]] = o == kInvalidIndex ? kInvalidIndex : he_map[o];
    }
    for (Index h = 0; h < half_edges_.size(); ++h) {
        if (!h_alive_[h]) continue;
        const HalfEdgeRec& rec = half_edges_[h];
        hes[he_map[h]] = {maps.vertex_map[rec.origin],
                          rec.twin == kInvalidIndex ? kInvalidIndex : he_map[rec.twin],
                          he_map[rec.next], maps.face_map[rec.face]};
    }
    for (Index f = 0; f < face_half_edge_.size(); ++f)
        if (f_alive_[f]) face_he[maps.face_map[f]] = he_map[face_half_edge_[f]];

    positions_ = std::move(positions);
    vertex_out_ = std::move(vertex_out);
    half_edges_ = std::move(hes);
    face_half_edge_ = std::move(face_he);
    v_alive_.assign(nv, 1);
    h_alive_.assign(nh, 1);
    f_alive_.assign(nf, 1);
    free_vertices_.clear();
    free_half_edges_.clear();
    free_faces_.clear();
    live_vertices_ = nv;
    live_half_edges_ = nh;
    live_faces_ = nf;
    return maps;
}

std::vector<std::array<Index, 3>> HalfEdgeMesh::face_list() const {
    std::vector<std::array<Index, 3>> out;
    out.reserve(live_faces_);
    for (Index f = 0; f < face_half_edge_.size(); ++f)
        if (f_alive_[f]) out.push_back(face_vertices(f));
    return out;
}

}  // namespace isoremesh
