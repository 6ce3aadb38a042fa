#include <doctest.h>

#include <cstdint>
#include <cstring>
#include <set>
#include <sstream>

#include "isoremesh/mesh_io.hpp"
#include "test_support.hpp"

using namespace isoremesh;
using namespace isoremesh::testing;

namespace {

HalfEdgeMesh load_obj_string(const std::string& text) {
    std::istringstream in(text);
    return load_mesh(in, MeshFormat::Obj);
}

HalfEdgeMesh load_ply_string(const std::string& bytes) {
    std::istringstream in(bytes);
    return load_mesh(in, MeshFormat::Ply);
}

const char* kTetraObj =
    "v 1 1 1\nv 1 -1 -1\nv -1 1 -1\nv -1 -1 1\n"
    "f 1 2 3\nf 1 4 2\nf 1 3 4\nf 2 4 3\n";

}  // namespace

TEST_CASE("obj: single triangle") {
    const HalfEdgeMesh m = load_obj_string("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n");
    CHECK(m.vertex_count() == 3);
    CHECK(m.edge_count() == 3);
    CHECK(m.face_count() == 1);
    CHECK(m.validate().boundary_edge_count == 3);
}

TEST_CASE("obj: tetrahedron and round trip") {
    const HalfEdgeMesh m = load_obj_string(kTetraObj);
    CHECK(m.vertex_count() == 4);
    CHECK(m.edge_count() == 6);
    CHECK(m.face_count() == 4);
    CHECK(m.validate().euler_characteristic == 2);
    CHECK(m.validate().boundary_edge_count == 0);

    const std::string saved = save_mesh(m, MeshFormat::Obj);
    const HalfEdgeMesh re = load_obj_string(saved);
    CHECK(re.vertex_count() == 4);
    CHECK(re.face_count() == 4);
    // Identical bytes after a save/load/save cycle: isomorphic round trip.
    CHECK(save_mesh(re, MeshFormat::Obj) == saved);
}

TEST_CASE("obj: quad is fan-triangulated at its first vertex") {
    const HalfEdgeMesh m = load_obj_string(quad_obj());
    CHECK(m.vertex_count() == 4);
    CHECK(m.face_count() == 2);
    // Oracle: hand-built fan connectivity (0,1,2), (0,2,3).
    std::set<std::set<Index>> expected{{0, 1, 2}, {0, 2, 3}};
    std::set<std::set<Index>> got;
    for (const auto& f : m.face_list()) got.insert({f[0], f[1], f[2]});
    CHECK(got == expected);
    CHECK(find_edge(m, 0, 2) != kInvalidIndex);  // fan diagonal
}

TEST_CASE("obj: i/t/n index forms and negative indices") {
    const HalfEdgeMesh m = load_obj_string(
        "v 0 0 0\nv 1 0 0\nv 0 1 0\nvt 0 0\nvn 0 0 1\nf 1/1 2/1/1 3//1\n");
    CHECK(m.face_count() == 1);
    const HalfEdgeMesh n = load_obj_string("v 0 0 0\nv 1 0 0\nv 0 1 0\nf -3 -2 -1\n");
    CHECK(n.face_count() == 1);
}

TEST_CASE("obj: parse errors carry the line number") {
    try {
        load_obj_string("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 x\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 4);
    }
    CHECK_THROWS_AS(load_obj_string("v 0 0 0\nf 1 2 3\n"), ParseError);   // index out of range
    CHECK_THROWS_AS(load_obj_string("v 0 0\nf 1 1 1\n"), ParseError);     // malformed vertex
}

TEST_CASE("obj: non-manifold input carries a report") {
    const std::string text =
        "v 0 0 0\nv 1 0 0\nv 0.5 1 0\nv 0.5 -1 0\nv 0.5 0 1\n"
        "f 1 2 3\nf 2 1 4\nf 1 2 5\n";
    try {
        load_obj_string(text);
        FAIL("expected NonManifoldError");
    } catch (const NonManifoldError& e) {
        CHECK_FALSE(e.report.is_manifold);
        REQUIRE(e.report.non_manifold_edges.size() == 1);
    }
}

TEST_CASE("obj: inconsistent winding is rejected") {
    const std::string text = "v 0 0 0\nv 1 0 0\nv 0.5 1 0\nv 0.5 -1 0\nf 1 2 3\nf 1 2 4\n";
    CHECK_THROWS_AS(load_obj_string(text), OrientationError);
}

TEST_CASE("round trip preserves V/E/F after an edit") {
    HalfEdgeMesh m = make_two_triangle_strip();
    const Index e = find_edge(m, 0, 1);
    m.split_edge(e, m.edge_midpoint(e));
    const std::size_t v0 = m.vertex_count(), e0 = m.edge_count(), f0 = m.face_count();

    for (MeshFormat fmt : {MeshFormat::Obj, MeshFormat::Ply}) {
        std::istringstream in(save_mesh(m, fmt));
        const HalfEdgeMesh re = load_mesh(in, fmt);
        CHECK(re.vertex_count() == v0);
        CHECK(re.edge_count() == e0);
        CHECK(re.face_count() == f0);
    }
}

TEST_CASE("round trip positions are preserved within 1e-6") {
    const HalfEdgeMesh m = make_icosphere(2);
    for (MeshFormat fmt : {MeshFormat::Obj, MeshFormat::Ply}) {
        std::istringstream in(save_mesh(m, fmt));
        const HalfEdgeMesh re = load_mesh(in, fmt);
        REQUIRE(re.vertex_count() == m.vertex_count());
        for (Index v = 0; v < m.vertex_capacity(); ++v)
            CHECK(distance(m.position(v), re.position(v)) < 1e-6);
    }
}

TEST_CASE("empty mesh saves to a valid zero-element file") {
    const HalfEdgeMesh empty = build_half_edge({}, {});
    for (MeshFormat fmt : {MeshFormat::Obj, MeshFormat::Ply}) {
        const std::string data = save_mesh(empty, fmt);
        std::istringstream in(data);
        const HalfEdgeMesh re = load_mesh(in, fmt);
        CHECK(re.vertex_count() == 0);
        CHECK(re.face_count() == 0);
    }
}

TEST_CASE("ply: ascii with extra properties and quad faces") {
    const std::string text =
        "ply\nformat ascii 1.0\ncomment made by hand\n"
        "element vertex 4\n"
        "property float x\nproperty float y\nproperty float z\n"
        "property uchar red\n"
        "element face 1\n"
        "property list uchar int vertex_indices\n"
        "end_header\n"
        "0 0 0 255\n1 0 0 255\n1 1 0 255\n0 1 0 255\n"
        "4 0 1 2 3\n";
    const HalfEdgeMesh m = load_ply_string(text);
    CHECK(m.vertex_count() == 4);
    CHECK(m.face_count() == 2);  // fan-triangulated
}

TEST_CASE("ply: binary little endian") {
    std::string bytes =
        "ply\nformat binary_little_endian 1.0\n"
        "element vertex 3\n"
        "property float x\nproperty float y\nproperty float z\n"
        "element face 1\n"
        "property list uchar int vertex_indices\n"
        "end_header\n";
    auto push_f32 = [&](float f) {
        char buf[4];
        std::memcpy(buf, &f, 4);
        bytes.append(buf, 4);
    };
    auto push_i32 = [&](std::int32_t i) {
        char buf[4];
        std::memcpy(buf, &i, 4);
        bytes.append(buf, 4);
    };
    push_f32(0); push_f32(0); push_f32(0);
    push_f32(1); push_f32(0); push_f32(0);
    push_f32(0); push_f32(1); push_f32(0);
    bytes.push_back(static_cast<char>(3));
    push_i32(0); push_i32(1); push_i32(2);

    const HalfEdgeMesh m = load_ply_string(bytes);
    CHECK(m.vertex_count() == 3);
    CHECK(m.face_count() == 1);
    CHECK(m.position(1).x == doctest::Approx(1.0));
}

TEST_CASE("ply: big endian is rejected") {
    CHECK_THROWS_AS(load_ply_string("ply\nformat binary_big_endian 1.0\nend_header\n"), ParseError);
}

TEST_CASE("format_from_path") {
    CHECK(format_from_path("a/b/mesh.obj") == MeshFormat::Obj);
    CHECK(format_from_path("mesh.PLY") == MeshFormat::Ply);
    CHECK_THROWS_AS(format_from_path("mesh.stl"), IoError);
}
