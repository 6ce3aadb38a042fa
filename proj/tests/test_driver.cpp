#include <doctest.h>

#include <cmath>
#include <array>
#include <set>

#include "isoremesh/driver.hpp"
#include "isoremesh/metrics.hpp"
#include "test_support.hpp"

using namespace isoremesh;
using namespace isoremesh::testing;

namespace {

RemeshConfig config_for(const HalfEdgeMesh& mesh, double multi_parameter = 1.0) {
    RemeshConfig cfg;
    cfg.target_length = derive_target_length(mesh, multi_parameter);
    return cfg;
}

double in_range_fraction(const HalfEdgeMesh& mesh, const RemeshConfig& cfg) {
    std::size_t in = 0, total = 0;
    for (Index e : mesh.edges()) {
        ++total;
        const double len = mesh.edge_length(e);
        if (len >= cfg.collapse_factor * cfg.target_length &&
            len <= cfg.split_factor * cfg.target_length)
            ++in;
    }
    return total == 0 ? 1.0 : static_cast<double>(in) / static_cast<double>(total);
}

}  // namespace

TEST_CASE("derive_target_length") {
    const HalfEdgeMesh m = make_grid_patch(4, 4, 0.5);
    CHECK(derive_target_length(m, 1.0) == doctest::Approx(m.average_edge_length()));
    CHECK(derive_target_length(m, 2.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(derive_target_length(m, 0.0), InvalidConfigError);
}

TEST_CASE("remesh: already-isotropic patch converges with zero edits") {
    const HalfEdgeMesh input = make_grid_patch(8, 8, 1.0);
    const RemeshResult r = remesh(input, config_for(input));
    REQUIRE(r.report.iterations_run == 1);
    CHECK(r.report.iterations[0].edit_count() == 0);
    CHECK(r.report.converged);
}

TEST_CASE("remesh: input mesh value is untouched") {
    const HalfEdgeMesh input = make_perturbed_icosphere(3, 0.3, 1);
    const std::vector<Vec3> before = input.raw_positions();
    const std::size_t v0 = input.vertex_count();
    remesh(input, config_for(input));
    CHECK(input.raw_positions() == before);
    CHECK(input.vertex_count() == v0);
}

TEST_CASE("remesh: icosphere lands most edges inside the length band") {
    const HalfEdgeMesh input = make_icosphere(8);
    const RemeshConfig cfg = config_for(input);
    const RemeshResult r = remesh(input, cfg);
    CHECK(in_range_fraction(r.mesh, cfg) >= 0.8);
    const MeshValidationReport v = r.mesh.validate();
    CHECK(v.is_manifold);
    CHECK(v.euler_characteristic == 2);
}

TEST_CASE("remesh: multi-parameter controls resolution") {
    const HalfEdgeMesh input = make_icosphere(8);
    const RemeshResult coarse = remesh(input, config_for(input, 2.0));
    const RemeshResult fine = remesh(input, config_for(input, 0.5));
    CHECK(fine.mesh.face_count() > input.face_count());
    CHECK(coarse.mesh.face_count() <= input.face_count());
    CHECK(coarse.mesh.face_count() < fine.mesh.face_count());
}

TEST_CASE("remesh: angle optimization lowers theta_max versus the ablation") {
    const HalfEdgeMesh input = make_perturbed_icosphere(6, 0.35, 5);
    RemeshConfig enabled = config_for(input);
    RemeshConfig disabled = enabled;
    disabled.angle_opt_enabled = false;
    const RemeshResult with_guard = remesh(input, enabled);
    const RemeshResult without_guard = remesh(input, disabled);
    CHECK(angle_stats(with_guard.mesh).theta_max_deg <=
          angle_stats(without_guard.mesh).theta_max_deg);
}

TEST_CASE("remesh: determinism, identical runs produce identical meshes") {
    const HalfEdgeMesh input = make_perturbed_icosphere(4, 0.3, 8);
    const RemeshConfig cfg = config_for(input);
    const RemeshResult a = remesh(input, cfg);
    const RemeshResult b = remesh(input, cfg);
    REQUIRE(a.mesh.vertex_count() == b.mesh.vertex_count());
    CHECK(a.mesh.raw_positions() == b.mesh.raw_positions());
    CHECK(a.mesh.face_list() == b.mesh.face_list());
}

TEST_CASE("remesh: chi and boundary positions preserved end to end") {
    SUBCASE("torus keeps chi 0") {
        const HalfEdgeMesh input = make_torus(2.0, 0.8, 18, 9);
        const RemeshResult r = remesh(input, config_for(input));
        CHECK(r.mesh.validate().euler_characteristic == 0);
    }
    SUBCASE("disk keeps its rim") {
        const HalfEdgeMesh input = make_disk(5, 0.8);
        auto boundary_multiset = [](const HalfEdgeMesh& m) {
            std::multiset<std::array<double, 3>> out;
            for (Index v = 0; v < m.vertex_capacity(); ++v) {
                if (!m.vertex_alive(v) || !m.is_boundary_vertex(v)) continue;
                out.insert({m.position(v).x, m.position(v).y, m.position(v).z});
            }
            return out;
        };
        const auto before = boundary_multiset(input);
        const RemeshResult r = remesh(input, config_for(input));
        CHECK(boundary_multiset(r.mesh) == before);
        CHECK(r.mesh.validate().euler_characteristic == 1);
    }
}

TEST_CASE("remesh: edit counts do not grow by the final iteration") {
    const HalfEdgeMesh input = make_perturbed_icosphere(5, 0.35, 3);
    const RemeshResult r = remesh(input, config_for(input));
    REQUIRE(!r.report.iterations.empty());
    CHECK(r.report.iterations.back().edit_count() <= r.report.iterations.front().edit_count());
}

TEST_CASE("remesh: report pass snapshots satisfy Euler accounting") {
    const HalfEdgeMesh input = make_perturbed_icosphere(4, 0.35, 6);
    const RemeshResult r = remesh(input, config_for(input));
    std::size_t vertices = input.vertex_count();
    for (const IterationReport& it : r.report.iterations) {
        // Splits add exactly one vertex each, collapses remove exactly one.
        CHECK(it.split.vertices_after == vertices + it.split.performed);
        CHECK(it.collapse.vertices_after == it.split.vertices_after - it.collapse.performed);
        CHECK(it.flip.vertices_after == it.collapse.vertices_after);
        CHECK(it.smooth.vertices_after == it.flip.vertices_after);
        // chi from the post-pass snapshots stays constant.
        const long long chi_split = static_cast<long long>(it.split.vertices_after) -
                                    static_cast<long long>(it.split.edges_after) +
                                    static_cast<long long>(it.split.faces_after);
        CHECK(chi_split == 2);
        vertices = it.smooth.vertices_after;
    }
    CHECK(r.report.final_vertices == vertices);
}

TEST_CASE("remesh: invalid input is rejected before editing") {
    // Bowtie: two fans joined at one vertex -> build itself refuses, so feed
    // remesh a mesh that only fails validation later is not constructible;
    // instead check the zero-iteration path and config validation.
    const HalfEdgeMesh input = make_icosphere(2);
    RemeshConfig cfg = config_for(input);
    cfg.iterations = 0;
    const RemeshResult r = remesh(input, cfg);
    CHECK(r.mesh.vertex_count() == input.vertex_count());
    CHECK(r.mesh.face_count() == input.face_count());
    CHECK_FALSE(r.report.converged);

    RemeshConfig bad = config_for(input);
    bad.lambda = 0.0;
    CHECK_THROWS_AS(remesh(input, bad), InvalidConfigError);
}
