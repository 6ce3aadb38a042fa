#pragma once

#include <vector>

#include "isoremesh/half_edge_mesh.hpp"
#include "isoremesh/remesh_config.hpp"

namespace isoremesh {

struct IterationReport {
    PassStats split, collapse, flip, smooth;
    std::size_t edit_count() const { return split.performed + collapse.performed + flip.performed; }
};

struct RunReport {
    std::vector<IterationReport> iterations;
    std::size_t initial_vertices = 0, initial_faces = 0;
    std::size_t final_vertices = 0, final_faces = 0;
    bool converged = false;
    unsigned iterations_run = 0;
    double wall_seconds = 0.0;
    RemeshConfig config;

    std::size_t total_edits() const {
        std::size_t n = 0;
        for (const auto& it : iterations) n += it.edit_count();
        return n;
    }
};

struct RemeshResult {
    HalfEdgeMesh mesh;
    RunReport report;
};

// multi_parameter times the input's average edge length.
double derive_target_length(const HalfEdgeMesh& mesh, double multi_parameter);

// Full pipeline: build the surface cloud from the input once, then up to
// cfg.iterations rounds of split -> collapse -> flip -> smooth, stopping
// early once a round performs fewer than 0.1% of E edits. The input mesh is
// not modified; the returned mesh is compacted.
RemeshResult remesh(const HalfEdgeMesh& input, const RemeshConfig& cfg);

}  // namespace isoremesh
