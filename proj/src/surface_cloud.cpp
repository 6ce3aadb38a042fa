#include "isoremesh/surface_cloud.hpp"

#include <cmath>
#include <cstdio>

namespace isoremesh {

namespace {

MlsProjection project_onto(const KdTree& tree, const std::vector<Vec3>& normals, double h,
                           const Vec3& q) {
    MlsProjection result;
    result.position = q;
    const double gather_radius = 3.0 * h;
    const double stop = 1e-3 * h;
    const double inv_h2 = 1.0 / (h * h);

    std::vector<std::uint32_t> idx;
    for (unsigned iter = 0; iter < 10; ++iter) {
        result.iterations = iter + 1;
        idx.clear();
        tree.radius_query(result.position, gather_radius, idx);
        if (idx.empty())
            throw OutOfDomainError("MLS projection: no cloud samples within reach of query point");

        double wsum = 0.0;
        Vec3 centroid{}, normal{};
        for (std::uint32_t i : idx) {
            const double w = std::exp(-squared_distance(result.position, tree.point(i)) * inv_h2);
            wsum += w;
            centroid += w * tree.point(i);
            normal += w * normals[i];
        }
        centroid /= wsum;
        normal /= wsum;
        if (norm(normal) < 1e-6) {
            double sq;
            const std::uint32_t nearest = tree.nearest(result.position, &sq);
            result.position = tree.point(nearest);
            result.fallback = true;
            return result;
        }
        const Vec3 n = normalized(normal);
        const Vec3 step = -dot(result.position - centroid, n) * n;
        result.position += step;
        if (norm(step) < stop) break;
    }
    return result;
}

}  // namespace

SurfaceCloud SurfaceCloud::build(const HalfEdgeMesh& input) {
    SurfaceCloud cloud;
    cloud.bandwidth_ = 0.5 * input.average_edge_length();

    std::vector<Vec3> points, normals;
    points.reserve(input.vertex_count() + 7 * input.face_count());
    normals.reserve(points.capacity());

    for (Index v = 0; v < input.vertex_capacity(); ++v) {
        if (!input.vertex_alive(v)) continue;
        const Vec3 n = input.vertex_normal(v);
        if (norm(n) == 0.0) continue;  // isolated or fully degenerate star
        points.push_back(input.position(v));
        normals.push_back(n);
    }
    const std::size_t vertex_samples = points.size();

    const double area_eps = input.degenerate_area_threshold();
    for (Index f = 0; f < input.face_capacity(); ++f) {
        if (!input.face_alive(f)) continue;
        if (input.face_area(f) < area_eps) {
            ++cloud.skipped_faces_;
            continue;
        }
        const auto p = input.face_points(f);
        const Vec3 n = input.face_normal(f);
        const Vec3 c = (p[0] + p[1] + p[2]) / 3.0;
        const Vec3 m0 = midpoint(p[0], c);
        const Vec3 m1 = midpoint(p[1], c);
        const Vec3 m2 = midpoint(p[2], c);
        const Vec3 seven[7] = {c, m0, m1, m2, midpoint(m0, m1), midpoint(m1, m2), midpoint(m2, m0)};
        for (const Vec3& s : seven) {
            points.push_back(s);
            normals.push_back(n);
        }
    }

    // Settle the new points on the surface implied by the vertex samples; the
    // raw face samples sit at chord depth and would drag the fit inward.
    KdTree provisional(std::vector<Vec3>(points.begin(), points.begin() + vertex_samples));
    const std::vector<Vec3> provisional_normals(normals.begin(), normals.begin() + vertex_samples);
    for (std::size_t i = vertex_samples; i < points.size(); ++i) {
        try {
            points[i] =
                project_onto(provisional, provisional_normals, cloud.bandwidth_, points[i]).position;
        } catch (const OutOfDomainError&) {
            // Sparse or wildly graded vertex sampling: keep the raw position.
        }
    }

    cloud.tree_.build(std::move(points));
    cloud.normals_ = std::move(normals);
    return cloud;
}

MlsProjection SurfaceCloud::project(const Vec3& q) const {
    return project_onto(tree_, normals_, bandwidth_, q);
}

std::string SurfaceCloud::to_ply() const {
    std::string out;
    out += "ply\nformat ascii 1.0\n";
    out += "element vertex " + std::to_string(size()) + '\n';
    out += "property double x\nproperty double y\nproperty double z\n";
    out += "property double nx\nproperty double ny\nproperty double nz\n";
    out += "element face 0\nproperty list uchar int vertex_indices\nend_header\n";
    char buf[160];
    for (std::size_t i = 0; i < size(); ++i) {
        const Vec3& p = sample_position(i);
        const Vec3& n = sample_normal(i);
        std::snprintf(buf, sizeof buf, "%.9g %.9g %.9g %.9g %.9g %.9g\n", p.x, p.y, p.z, n.x, n.y, n.z);
        out += buf;
    }
    return out;
}

SurfaceCloud upsample_mesh(const HalfEdgeMesh& mesh) { return SurfaceCloud::build(mesh); }

Vec3 mls_project(const Vec3& q, const SurfaceCloud& cloud) { return cloud.project(q).position; }

}  // namespace isoremesh
