#include "isoremesh/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace isoremesh {

// ---------------------------------------------------------------------------
// angle statistics
// ---------------------------------------------------------------------------

AngleStats angle_stats(const HalfEdgeMesh& mesh, std::size_t bins) {
    AngleStats st;
    st.histogram.bins = bins;
    st.histogram.counts.assign(bins, 0);

    const double area_eps = mesh.degenerate_area_threshold();
    const double bin_width = 180.0 / static_cast<double>(bins);
    double deviation_sum = 0.0;

    for (Index f = 0; f < mesh.face_capacity(); ++f) {
        if (!mesh.face_alive(f)) continue;
        if (mesh.face_area(f) < area_eps) {
            ++st.degenerate_faces;
            continue;
        }
        const auto p = mesh.face_points(f);
        const double angles[3] = {degrees(angle_at(p[1], p[0], p[2])),
                                  degrees(angle_at(p[2], p[1], p[0])),
                                  degrees(angle_at(p[0], p[2], p[1]))};
        for (double a : angles) {
            st.theta_max_deg = std::max(st.theta_max_deg, a);
            deviation_sum += std::abs(a - 60.0);
            // Nudge keeps exact bin-boundary angles (e.g. 60.0 up to acos
            // rounding) in their nominal bin.
            auto bin = static_cast<std::size_t>((a + 1e-9) / bin_width);
            if (bin >= bins) bin = bins - 1;
            ++st.histogram.counts[bin];
            ++st.angle_count;
        }
    }
    if (st.angle_count == 0) throw EmptyInputError("angle_stats: no non-degenerate faces");
    st.theta_avg_deg = 60.0 - deviation_sum / static_cast<double>(st.angle_count);
    return st;
}

// ---------------------------------------------------------------------------
// surface sampling
// ---------------------------------------------------------------------------

SurfaceSamples sample_surface(const HalfEdgeMesh& mesh, std::size_t n, std::uint64_t seed) {
    const std::size_t nv = mesh.vertex_count();
    if (n < nv) throw Error("sample_surface: n must be at least the vertex count");

    SurfaceSamples out;
    out.positions.reserve(n);
    out.normals.reserve(n);
    for (Index v = 0; v < mesh.vertex_capacity(); ++v) {
        if (!mesh.vertex_alive(v)) continue;
        out.positions.push_back(mesh.position(v));
        out.normals.push_back(mesh.vertex_normal(v));
    }

    const std::size_t budget = n - nv;
    std::vector<Index> faces;
    std::vector<double> areas;
    double total_area = 0.0;
    for (Index f = 0; f < mesh.face_capacity(); ++f) {
        if (!mesh.face_alive(f)) continue;
        faces.push_back(f);
        areas.push_back(mesh.face_area(f));
        total_area += areas.back();
    }
    if (budget == 0) return out;
    if (!(total_area > 0.0)) throw EmptyInputError("sample_surface: mesh has zero area");

    // Stratified allocation: floor of the proportional share, remainder to the
    // largest fractional parts (ties to the lower face id).
    std::vector<std::size_t> count(faces.size(), 0);
    std::vector<std::pair<double, std::size_t>> fractional(faces.size());
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < faces.size(); ++i) {
        const double share = static_cast<double>(budget) * areas[i] / total_area;
        count[i] = static_cast<std::size_t>(share);
        assigned += count[i];
        fractional[i] = {share - static_cast<double>(count[i]), i};
    }
    std::sort(fractional.begin(), fractional.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (std::size_t k = 0; assigned < budget; ++k, ++assigned)
        ++count[fractional[k % fractional.size()].second];

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (std::size_t i = 0; i < faces.size(); ++i) {
        if (count[i] == 0) continue;
        const auto p = mesh.face_points(faces[i]);
        const Vec3 normal = mesh.face_normal(faces[i]);
        for (std::size_t k = 0; k < count[i]; ++k) {
            const double u = std::sqrt(uni(rng));
            const double v = uni(rng);
            out.positions.push_back((1.0 - u) * p[0] + u * (1.0 - v) * p[1] + u * v * p[2]);
            out.normals.push_back(normal);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// closest point / distance queries
// ---------------------------------------------------------------------------

Vec3 closest_point_on_triangle(const Vec3& q, const Vec3& a, const Vec3& b, const Vec3& c) {
    // Ericson, Real-Time Collision Detection, 5.1.5.
    const Vec3 ab = b - a, ac = c - a, aq = q - a;
    const double d1 = dot(ab, aq), d2 = dot(ac, aq);
    if (d1 <= 0.0 && d2 <= 0.0) return a;

    const Vec3 bq = q - b;
    const double d3 = dot(ab, bq), d4 = dot(ac, bq);
    if (d3 >= 0.0 && d4 <= d3) return b;

    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + (d1 / (d1 - d3)) * ab;

    const Vec3 cq = q - c;
    const double d5 = dot(ab, cq), d6 = dot(ac, cq);
    if (d6 >= 0.0 && d5 <= d6) return c;

    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + (d2 / (d2 - d6)) * ac;

    const double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && d4 - d3 >= 0.0 && d5 - d6 >= 0.0)
        return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);

    const double denom = 1.0 / (va + vb + vc);
    return a + (vb * denom) * ab + (vc * denom) * ac;
}

namespace {

double squared_distance_to_box(const Vec3& q, const Vec3& lo, const Vec3& hi) {
    double d = 0.0;
    for (int i = 0; i < 3; ++i) {
        if (q[i] < lo[i]) d += (lo[i] - q[i]) * (lo[i] - q[i]);
        else if (q[i] > hi[i]) d += (q[i] - hi[i]) * (q[i] - hi[i]);
    }
    return d;
}

}  // namespace

MeshDistance::MeshDistance(const HalfEdgeMesh& mesh) {
    triangles_.reserve(mesh.face_count());
    for (Index f = 0; f < mesh.face_capacity(); ++f)
        if (mesh.face_alive(f)) triangles_.push_back(mesh.face_points(f));
    order_.resize(triangles_.size());
    std::iota(order_.begin(), order_.end(), 0u);
    if (!triangles_.empty()) build(0, static_cast<std::uint32_t>(triangles_.size()));
}

std::uint32_t MeshDistance::build(std::uint32_t begin, std::uint32_t end) {
    const auto id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back({});
    Vec3 lo = triangles_[order_[begin]][0], hi = lo;
    for (std::uint32_t i = begin; i < end; ++i) {
        for (const Vec3& p : triangles_[order_[i]]) {
            lo.x = std::min(lo.x, p.x); lo.y = std::min(lo.y, p.y); lo.z = std::min(lo.z, p.z);
            hi.x = std::max(hi.x, p.x); hi.y = std::max(hi.y, p.y); hi.z = std::max(hi.z, p.z);
        }
    }
    nodes_[id].lo = lo;
    nodes_[id].hi = hi;
    if (end - begin <= 8) {
        nodes_[id].leaf = true;
        nodes_[id].begin = begin;
        nodes_[id].end = end;
        return id;
    }
    const Vec3 extent = hi - lo;
    int dim = 0;
    if (extent.y > extent[dim]) dim = 1;
    if (extent.z > extent[dim]) dim = 2;
    const std::uint32_t mid = begin + (end - begin) / 2;
    auto centroid = [&](std::uint32_t t) {
        const auto& tri = triangles_[t];
        return (tri[0][dim] + tri[1][dim] + tri[2][dim]) / 3.0;
    };
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](std::uint32_t x, std::uint32_t y) {
                         const double cx = centroid(x), cy = centroid(y);
                         if (cx != cy) return cx < cy;
                         return x < y;
                     });
    const std::uint32_t l = build(begin, mid);
    const std::uint32_t r = build(mid, end);
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
}

double MeshDistance::squared_distance(const Vec3& q) const {
    if (triangles_.empty()) throw EmptyInputError("point_to_mesh_distance: mesh has no faces");
    double best = std::numeric_limits<double>::max();
    // Explicit stack, nearer child first.
    std::uint32_t stack[64];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
        const Node& n = nodes_[stack[--top]];
        if (squared_distance_to_box(q, n.lo, n.hi) >= best) continue;
        if (n.leaf) {
            for (std::uint32_t i = n.begin; i < n.end; ++i) {
                const auto& t = triangles_[order_[i]];
                const Vec3 cp = closest_point_on_triangle(q, t[0], t[1], t[2]);
                best = std::min(best, isoremesh::squared_distance(q, cp));
            }
            continue;
        }
        const double dl = squared_distance_to_box(q, nodes_[n.left].lo, nodes_[n.left].hi);
        const double dr = squared_distance_to_box(q, nodes_[n.right].lo, nodes_[n.right].hi);
        if (dl <= dr) {
            if (dr < best) stack[top++] = n.right;
            if (dl < best) stack[top++] = n.left;
        } else {
            if (dl < best) stack[top++] = n.left;
            if (dr < best) stack[top++] = n.right;
        }
    }
    return best;
}

double MeshDistance::distance(const Vec3& q) const { return std::sqrt(squared_distance(q)); }

double point_to_mesh_distance(const Vec3& q, const HalfEdgeMesh& mesh) {
    return MeshDistance(mesh).distance(q);
}

// ---------------------------------------------------------------------------
// surface-to-surface metrics
// ---------------------------------------------------------------------------

namespace {

DistancePair directed(const SurfaceSamples& from, const MeshDistance& to) {
    double max_d = 0.0, sum = 0.0;
    for (const Vec3& p : from.positions) {
        const double d = to.distance(p);
        max_d = std::max(max_d, d);
        sum += d;
    }
    return {max_d, from.positions.empty() ? 0.0 : sum / static_cast<double>(from.positions.size())};
}

}  // namespace

DistancePair surface_distances(const HalfEdgeMesh& a, const HalfEdgeMesh& b, std::size_t n,
                               std::uint64_t seed) {
    const SurfaceSamples sa = sample_surface(a, std::max(n, a.vertex_count()), seed);
    const SurfaceSamples sb = sample_surface(b, std::max(n, b.vertex_count()), seed);
    const MeshDistance da(a), db(b);
    const DistancePair ab = directed(sa, db);
    const DistancePair ba = directed(sb, da);
    return {std::max(ab.hausdorff, ba.hausdorff), 0.5 * (ab.mean + ba.mean)};
}

double hausdorff_distance(const HalfEdgeMesh& a, const HalfEdgeMesh& b, std::size_t n,
                          std::uint64_t seed) {
    return surface_distances(a, b, n, seed).hausdorff;
}

double mean_distance(const HalfEdgeMesh& a, const HalfEdgeMesh& b, std::size_t n,
                     std::uint64_t seed) {
    return surface_distances(a, b, n, seed).mean;
}

std::size_t default_sample_count(const HalfEdgeMesh& mesh) {
    return std::min<std::size_t>(100 * mesh.vertex_count(), 1000000);
}

QualityReport quality_report(const HalfEdgeMesh& original, const HalfEdgeMesh& remeshed,
                             std::size_t n, std::uint64_t seed) {
    QualityReport r;
    const DistancePair d = surface_distances(original, remeshed, n, seed);
    r.hausdorff = d.hausdorff;
    r.mean_dist = d.mean;
    const double diag = original.bounding_box_diagonal();
    r.hausdorff_norm = diag > 0.0 ? d.hausdorff / diag : d.hausdorff;
    r.mean_dist_norm = diag > 0.0 ? d.mean / diag : d.mean;

    const AngleStats st = angle_stats(remeshed);
    r.theta_max_deg = st.theta_max_deg;
    r.theta_avg_deg = st.theta_avg_deg;
    r.histogram = st.histogram;
    r.degenerate_faces = st.degenerate_faces;

    r.vertices = remeshed.vertex_count();
    r.faces = remeshed.face_count();
    r.original_vertices = original.vertex_count();
    r.original_faces = original.face_count();
    r.samples = n;
    r.seed = seed;
    return r;
}

}  // namespace isoremesh
