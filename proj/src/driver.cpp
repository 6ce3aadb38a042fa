#include "isoremesh/driver.hpp"

#include <chrono>
#include <optional>

#include "isoremesh/angle_ops.hpp"
#include "isoremesh/log.hpp"
#include "isoremesh/smoothing.hpp"
#include "isoremesh/surface_cloud.hpp"

namespace isoremesh {

double derive_target_length(const HalfEdgeMesh& mesh, double multi_parameter) {
    if (!(multi_parameter > 0.0)) throw InvalidConfigError("multi-parameter must be > 0");
    return multi_parameter * mesh.average_edge_length();
}

RemeshResult remesh(const HalfEdgeMesh& input, const RemeshConfig& cfg) {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();

    cfg.validate();
    MeshValidationReport vr = input.validate();
    if (!vr.is_manifold)
        throw NonManifoldError("remesh: input mesh failed validation", std::move(vr));

    RemeshResult result{input, {}};
    RunReport& rep = result.report;
    rep.config = cfg;
    rep.initial_vertices = input.vertex_count();
    rep.initial_faces = input.face_count();

    HalfEdgeMesh& mesh = result.mesh;
    const bool has_surface = input.face_count() > 0;

    std::optional<SurfaceCloud> cloud;
    if (cfg.mls_enabled && has_surface) cloud = SurfaceCloud::build(input);

    for (unsigned it = 0; it < cfg.iterations && has_surface; ++it) {
        const auto edges_before = static_cast<double>(mesh.edge_count());

        IterationReport ir;
        ir.split = run_split_pass(mesh, cfg);
        ir.collapse = run_collapse_pass(mesh, cfg);
        ir.flip = run_flip_pass(mesh, cfg);
        ir.smooth = smooth_pass(mesh, cloud ? &*cloud : nullptr, cfg);

        const std::size_t edits = ir.edit_count();
        rep.iterations.push_back(std::move(ir));
        rep.iterations_run = it + 1;
        log_info("iteration " + std::to_string(it + 1) + ": " + std::to_string(edits) + " edits");

        if (static_cast<double>(edits) < 0.001 * edges_before) {
            rep.converged = true;
            break;
        }
    }

    mesh.compact();
    rep.final_vertices = mesh.vertex_count();
    rep.final_faces = mesh.face_count();
    rep.wall_seconds = std::chrono::duration<double>(clock::now() - t0).count();
    return result;
}

}  // namespace isoremesh
