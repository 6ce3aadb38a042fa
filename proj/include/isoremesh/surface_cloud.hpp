#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "isoremesh/half_edge_mesh.hpp"
#include "isoremesh/kd_tree.hpp"

namespace isoremesh {

struct MlsProjection {
    Vec3 position;
    bool fallback = false;  // true when the normal aggregate degenerated
    unsigned iterations = 0;
};

// Immutable oriented point set sampled from the input mesh: every vertex with
// its vertex normal plus seven points per face (centroid, the midpoints of
// each vertex-centroid segment, and the centers between those midpoints), all
// face points MLS-adjusted once at construction. This is the reference
// surface the smoothing pass projects onto.
class SurfaceCloud {
public:
    static SurfaceCloud build(const HalfEdgeMesh& input);

    std::size_t size() const { return tree_.size(); }
    const Vec3& sample_position(std::size_t i) const { return tree_.point(static_cast<std::uint32_t>(i)); }
    const Vec3& sample_normal(std::size_t i) const { return normals_[i]; }
    double bandwidth() const { return bandwidth_; }
    std::size_t skipped_degenerate_faces() const { return skipped_faces_; }

    // Iterative weighted-plane projection: gather within 3h, Gaussian weights
    // exp(-d^2/h^2), move along the weighted mean normal onto the weighted
    // centroid plane; stops below 1e-3*h displacement or after 10 rounds.
    // Throws OutOfDomainError when no sample lies within 3h of the point.
    MlsProjection project(const Vec3& q) const;

    std::string to_ply() const;  // debug export: positions + normals, ascii

private:
    SurfaceCloud() = default;

    KdTree tree_;
    std::vector<Vec3> normals_;
    double bandwidth_ = 0.0;
    std::size_t skipped_faces_ = 0;
};

// Spec-level names for the two operations.
SurfaceCloud upsample_mesh(const HalfEdgeMesh& mesh);
Vec3 mls_project(const Vec3& q, const SurfaceCloud& cloud);

}  // namespace isoremesh
