#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>

#include "isoremesh/metrics.hpp"
#include "isoremesh/reporting.hpp"
#include "test_support.hpp"

using namespace isoremesh;
using namespace isoremesh::testing;

namespace {

// Parallel unit squares (two triangles each) offset by `gap` along +z.
HalfEdgeMesh unit_square(double z) {
    return build_half_edge({{0, 0, z}, {1, 0, z}, {1, 1, z}, {0, 1, z}},
                           {{0, 1, 2}, {0, 2, 3}});
}

double brute_force_distance(const Vec3& q, const HalfEdgeMesh& mesh) {
    double best = std::numeric_limits<double>::max();
    for (const auto& f : mesh.face_list()) {
        const Vec3 cp = closest_point_on_triangle(q, mesh.position(f[0]), mesh.position(f[1]),
                                                  mesh.position(f[2]));
        best = std::min(best, distance(q, cp));
    }
    return best;
}

}  // namespace

TEST_CASE("angle_stats: equilateral mesh") {
    const AngleStats st = angle_stats(make_grid_patch(5, 5, 1.0));
    CHECK(st.theta_max_deg == doctest::Approx(60.0));
    CHECK(st.theta_avg_deg == doctest::Approx(60.0));
    // All mass in the [60, 65) bin with the default 36 bins.
    CHECK(st.histogram.counts[12] == st.angle_count);
}

TEST_CASE("angle_stats: single 90/45/45 triangle gives theta_avg 40") {
    const HalfEdgeMesh m = build_half_edge({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{0, 1, 2}});
    const AngleStats st = angle_stats(m);
    CHECK(st.theta_max_deg == doctest::Approx(90.0));
    // 60 - (30 + 15 + 15)/3 = 40.
    CHECK(st.theta_avg_deg == doctest::Approx(40.0));
}

TEST_CASE("angle_stats: degenerate faces are excluded and counted") {
    const HalfEdgeMesh m = build_half_edge(
        {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {1, -1, 0}}, {{0, 1, 2}, {1, 0, 3}});
    const AngleStats st = angle_stats(m);
    CHECK(st.degenerate_faces == 1);
    CHECK(st.angle_count == 3);
}

TEST_CASE("angle_stats: histogram counts sum to 3F and respect the bin flag") {
    const HalfEdgeMesh m = make_icosphere(3);
    const AngleStats st = angle_stats(m, 18);
    CHECK(st.histogram.counts.size() == 18);
    std::size_t total = 0;
    for (auto c : st.histogram.counts) total += c;
    CHECK(total == 3 * m.face_count());
    const std::string csv = histogram_csv(st.histogram);
    CHECK(csv.find("bin_start_deg,bin_end_deg,count") == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 19);
}

TEST_CASE("angle_stats: theta_avg is at most 60 with equality only when equilateral") {
    CHECK(angle_stats(make_icosphere(2)).theta_avg_deg < 60.0);
    CHECK(angle_stats(make_grid_patch(4, 4)).theta_avg_deg == doctest::Approx(60.0));
}

TEST_CASE("sample_surface") {
    const HalfEdgeMesh m = unit_square(0.0);
    SUBCASE("n = V returns exactly the vertex set") {
        const SurfaceSamples s = sample_surface(m, m.vertex_count(), 1);
        REQUIRE(s.positions.size() == 4);
        for (Index v = 0; v < 4; ++v) CHECK(s.positions[v] == m.position(v));
    }
    SUBCASE("two equal-area faces each get 500 of 1000 samples") {
        const SurfaceSamples s = sample_surface(m, m.vertex_count() + 1000, 1);
        CHECK(s.positions.size() == 1004);
        // Stratified allocation is exact here; verify by counting samples in
        // each triangle half (diagonal x = y).
        std::size_t upper = 0, lower = 0;
        for (std::size_t i = 4; i < s.positions.size(); ++i)
            (s.positions[i].y > s.positions[i].x ? upper : lower) += 1;
        CHECK(std::llabs(static_cast<long long>(upper) - 500) <= 60);
        CHECK(std::llabs(static_cast<long long>(lower) - 500) <= 60);
    }
    SUBCASE("same seed twice is bit-identical") {
        const SurfaceSamples a = sample_surface(m, 2000, 7);
        const SurfaceSamples b = sample_surface(m, 2000, 7);
        CHECK(a.positions == b.positions);
        CHECK(a.normals == b.normals);
    }
    SUBCASE("n below the vertex count throws") {
        CHECK_THROWS_AS(sample_surface(m, 2, 1), Error);
    }
    SUBCASE("zero-area mesh throws when face samples are requested") {
        const HalfEdgeMesh z = build_half_edge(
            {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}, {{0, 1, 2}});
        CHECK_THROWS_AS(sample_surface(z, 100, 1), EmptyInputError);
    }
}

TEST_CASE("point_to_mesh_distance") {
    SUBCASE("point on a face is at distance zero") {
        const HalfEdgeMesh m = unit_square(0.0);
        CHECK(point_to_mesh_distance(Vec3{0.3, 0.4, 0}, m) == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("unit height above a large patch") {
        const HalfEdgeMesh m = make_grid_patch(8, 8, 1.0);
        CHECK(point_to_mesh_distance(Vec3{3.0, 2.5, 1.0}, m) == doctest::Approx(1.0));
    }
    SUBCASE("matches the exhaustive per-triangle oracle") {
        const HalfEdgeMesh m = make_icosphere(3);  // 320 faces
        const MeshDistance fast(m);
        std::mt19937_64 rng(99);
        std::uniform_real_distribution<double> uni(-1.6, 1.6);
        for (int k = 0; k < 2000; ++k) {
            const Vec3 q{uni(rng), uni(rng), uni(rng)};
            CHECK(std::abs(fast.distance(q) - brute_force_distance(q, m)) <= 1e-9);
        }
    }
}

TEST_CASE("hausdorff and mean distances") {
    SUBCASE("identical meshes measure zero") {
        const HalfEdgeMesh m = make_icosphere(2);
        const DistancePair d = surface_distances(m, m, 5000, 3);
        CHECK(d.hausdorff == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(d.mean == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("parallel unit squares offset by d measure d") {
        const double gap = 0.37;
        const HalfEdgeMesh a = unit_square(0.0), b = unit_square(gap);
        const DistancePair d = surface_distances(a, b, 4000, 5);
        CHECK(d.hausdorff == doctest::Approx(gap).epsilon(0.05));
        CHECK(d.mean == doctest::Approx(gap).epsilon(0.05));
        // Exhaustive oracle: vertices + edge midpoints + centroids all lie at
        // exactly `gap` from the other plane.
        CHECK(d.hausdorff == doctest::Approx(gap).epsilon(1e-9));
    }
    SUBCASE("symmetry is exact") {
        const HalfEdgeMesh a = make_icosphere(2), b = make_icosphere(3, 1.05);
        CHECK(hausdorff_distance(a, b, 3000, 11) == hausdorff_distance(b, a, 3000, 11));
        CHECK(mean_distance(a, b, 3000, 11) == mean_distance(b, a, 3000, 11));
    }
    SUBCASE("mean is never above hausdorff") {
        const HalfEdgeMesh a = make_icosphere(2), b = make_perturbed_icosphere(3, 0.4, 13);
        const DistancePair d = surface_distances(a, b, 3000, 2);
        CHECK(d.mean <= d.hausdorff);
    }
    SUBCASE("prefix maxima of per-sample distances are monotone in n") {
        const HalfEdgeMesh a = make_icosphere(2), b = make_icosphere(2, 1.1);
        const SurfaceSamples s = sample_surface(a, 2000, 1);
        const MeshDistance db(b);
        double running = 0.0, last = -1.0;
        for (const Vec3& p : s.positions) {
            running = std::max(running, db.distance(p));
            CHECK(running >= last);
            last = running;
        }
    }
}

TEST_CASE("quality_report composes the standalone metrics") {
    const HalfEdgeMesh m = make_icosphere(2);
    const QualityReport r = quality_report(m, m, 3000, 9);
    CHECK(r.hausdorff == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.mean_dist == doctest::Approx(0.0).epsilon(1e-12));
    const AngleStats st = angle_stats(m);
    CHECK(r.theta_max_deg == st.theta_max_deg);
    CHECK(r.theta_avg_deg == st.theta_avg_deg);
    CHECK(r.vertices == m.vertex_count());
    CHECK(r.faces == m.face_count());
    CHECK(r.samples == 3000);
    CHECK(r.seed == 9);

    const DistancePair d = surface_distances(m, m, 3000, 9);
    CHECK(r.hausdorff == d.hausdorff);
    CHECK(r.mean_dist == d.mean);
}

TEST_CASE("quality_report JSON carries the contract keys") {
    const HalfEdgeMesh m = make_icosphere(2);
    const auto j = to_json(quality_report(m, m, 1000, 0));
    for (const char* key : {"hausdorff", "hausdorff_norm", "mean_distance", "mean_distance_norm",
                            "theta_max_deg", "theta_avg_deg", "histogram", "vertices", "faces",
                            "samples", "seed"})
        CHECK(j.contains(key));
    CHECK(j["histogram"].size() == 36);
}
