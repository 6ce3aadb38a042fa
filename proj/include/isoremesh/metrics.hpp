#pragma once

#include <cstdint>
#include <vector>

#include "isoremesh/half_edge_mesh.hpp"

namespace isoremesh {

struct AngleHistogram {
    std::size_t bins = 36;  // over [0°, 180°]
    std::vector<std::size_t> counts;
    double bin_width_deg() const { return 180.0 / static_cast<double>(bins); }
};

struct AngleStats {
    double theta_max_deg = 0.0;
    double theta_avg_deg = 0.0;  // 60° minus the mean absolute deviation from 60°
    AngleHistogram histogram;
    std::size_t angle_count = 0;        // 3 x non-degenerate faces
    std::size_t degenerate_faces = 0;   // excluded from the statistics
};

AngleStats angle_stats(const HalfEdgeMesh& mesh, std::size_t bins = 36);

struct SurfaceSamples {
    std::vector<Vec3> positions;
    std::vector<Vec3> normals;
};

// All live vertices (with vertex normals) plus area-proportional stratified
// face samples (with face normals) totaling n points; deterministic per seed.
// Requires n >= vertex count and positive total area.
SurfaceSamples sample_surface(const HalfEdgeMesh& mesh, std::size_t n, std::uint64_t seed);

Vec3 closest_point_on_triangle(const Vec3& q, const Vec3& a, const Vec3& b, const Vec3& c);

// Exact point-to-surface distance accelerated by an AABB tree over the faces.
class MeshDistance {
public:
    explicit MeshDistance(const HalfEdgeMesh& mesh);
    double squared_distance(const Vec3& q) const;
    double distance(const Vec3& q) const;
    bool empty() const { return triangles_.empty(); }

private:
    struct Node {
        Vec3 lo, hi;
        std::uint32_t left = 0, right = 0;
        std::uint32_t begin = 0, end = 0;
        bool leaf = false;
    };
    std::uint32_t build(std::uint32_t begin, std::uint32_t end);

    std::vector<std::array<Vec3, 3>> triangles_;
    std::vector<std::uint32_t> order_;
    std::vector<Node> nodes_;
};

// Convenience form; builds the acceleration structure per call.
double point_to_mesh_distance(const Vec3& q, const HalfEdgeMesh& mesh);

struct DistancePair {
    double hausdorff = 0.0;
    double mean = 0.0;
};

// Symmetric sampled surface distances: both directed terms share the same
// per-mesh sample sets, so the result is exactly symmetric in (a, b).
DistancePair surface_distances(const HalfEdgeMesh& a, const HalfEdgeMesh& b, std::size_t n,
                               std::uint64_t seed);
double hausdorff_distance(const HalfEdgeMesh& a, const HalfEdgeMesh& b, std::size_t n,
                          std::uint64_t seed);
double mean_distance(const HalfEdgeMesh& a, const HalfEdgeMesh& b, std::size_t n,
                     std::uint64_t seed);

struct QualityReport {
    double hausdorff = 0.0;
    double hausdorff_norm = 0.0;  // divided by the original mesh's bbox diagonal
    double mean_dist = 0.0;
    double mean_dist_norm = 0.0;
    double theta_max_deg = 0.0;
    double theta_avg_deg = 0.0;
    AngleHistogram histogram;
    std::size_t vertices = 0, faces = 0;  // evaluated (remeshed) mesh
    std::size_t original_vertices = 0, original_faces = 0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    std::size_t degenerate_faces = 0;
};

// Angle statistics on `remeshed`, distances between the two surfaces.
QualityReport quality_report(const HalfEdgeMesh& original, const HalfEdgeMesh& remeshed,
                             std::size_t n, std::uint64_t seed);

// Default sampling budget: 100 per vertex, capped at 1e6.
std::size_t default_sample_count(const HalfEdgeMesh& mesh);

}  // namespace isoremesh
