#include <doctest.h>

#include <cstdlib>
#include <algorithm>
#include <sys/wait.h>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "isoremesh/mesh_io.hpp"
#include "test_support.hpp"

using namespace isoremesh;
using namespace isoremesh::testing;
namespace fs = std::filesystem;

namespace {

std::string cli_path() {
    if (const char* env = std::getenv("ISOREMESH_BIN")) return env;
    return ISOREMESH_CLI_PATH;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("isoremesh_cli_test_XXXXXX");
        std::string templ = path.string();
        REQUIRE(mkdtemp(templ.data()) != nullptr);
        path = templ;
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

int run_cli(const std::string& args) {
    const std::string cmd = cli_path() + " " + args + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out);
    out << data;
}

}  // namespace

TEST_CASE("cli: remesh runs end to end and exit codes are honored") {
    TempDir dir;
    const std::string input = dir.file("sphere.obj");
    save_mesh_file(make_icosphere(4), input);

    SUBCASE("success is exit 0 and writes the output") {
        const int rc = run_cli("remesh --input " + input + " --output " + dir.file("out.obj") +
                               " --multi-parameter 1.0 --iterations 4");
        CHECK(rc == 0);
        const HalfEdgeMesh out = load_mesh_file(dir.file("out.obj"));
        CHECK(out.face_count() > 0);
        CHECK(out.validate().is_manifold);
    }
    SUBCASE("missing required flag is exit 2") {
        CHECK(run_cli("remesh --input " + input) == 2);
    }
    SUBCASE("unknown flag is exit 2") {
        CHECK(run_cli("remesh --input " + input + " --output " + dir.file("o.obj") +
                      " --frobnicate") == 2);
    }
    SUBCASE("unreadable input is exit 4") {
        CHECK(run_cli("remesh --input " + dir.file("missing.obj") + " --output " +
                      dir.file("o.obj")) == 4);
    }
    SUBCASE("malformed input is exit 3") {
        write_file(dir.file("bad.obj"), "v 0 0 0\nf 1 2 3\n");
        CHECK(run_cli("remesh --input " + dir.file("bad.obj") + " --output " + dir.file("o.obj")) ==
              3);
    }
    SUBCASE("invalid tuning value is exit 2") {
        CHECK(run_cli("remesh --input " + input + " --output " + dir.file("o.obj") +
                      " --lambda 0") == 2);
    }
}

TEST_CASE("cli: iterations 0 reproduces the input modulo format round trip") {
    TempDir dir;
    const HalfEdgeMesh sphere = make_icosphere(2);
    const std::string input = dir.file("in.obj");
    save_mesh_file(sphere, input);
    REQUIRE(run_cli("remesh --input " + input + " --output " + dir.file("out.obj") +
                    " --iterations 0") == 0);
    CHECK(slurp(dir.file("out.obj")) == save_mesh(sphere, MeshFormat::Obj));
}

TEST_CASE("cli: metrics of a file against itself is zero distance") {
    TempDir dir;
    const std::string input = dir.file("m.obj");
    save_mesh_file(make_icosphere(3), input);
    REQUIRE(run_cli("metrics --original " + input + " --remeshed " + input + " --output " +
                    dir.file("q.json") + " --samples 5000 --seed 7") == 0);
    const auto j = nlohmann::json::parse(slurp(dir.file("q.json")));
    CHECK(j["hausdorff"].get<double>() <= 1e-12);
    CHECK(j["mean_distance"].get<double>() <= 1e-12);
    CHECK(j["samples"] == 5000);
    CHECK(j["seed"] == 7);
}

TEST_CASE("cli: determinism, repeated invocations are byte-identical") {
    TempDir dir;
    const std::string input = dir.file("in.obj");
    save_mesh_file(make_perturbed_icosphere(4, 0.3, 12), input);

    for (int run = 0; run < 2; ++run) {
        const std::string suffix = run == 0 ? "_a" : "_b";
        REQUIRE(run_cli("remesh --input " + input + " --output " + dir.file("out" + suffix + ".obj") +
                        " --iterations 5 --seed 3") == 0);
        REQUIRE(run_cli("metrics --original " + input + " --remeshed " +
                        dir.file("out" + suffix + ".obj") + " --output " +
                        dir.file("q" + suffix + ".json") + " --samples 20000 --seed 3") == 0);
        REQUIRE(run_cli("histogram --input " + dir.file("out" + suffix + ".obj") + " --output " +
                        dir.file("h" + suffix + ".csv")) == 0);
    }
    CHECK(slurp(dir.file("out_a.obj")) == slurp(dir.file("out_b.obj")));
    CHECK(slurp(dir.file("q_a.json")) == slurp(dir.file("q_b.json")));
    CHECK(slurp(dir.file("h_a.csv")) == slurp(dir.file("h_b.csv")));
}

TEST_CASE("cli: cross-format remesh, obj in ply out") {
    TempDir dir;
    const std::string input = dir.file("in.obj");
    save_mesh_file(make_icosphere(3), input);
    REQUIRE(run_cli("remesh --input " + input + " --output " + dir.file("out.ply") +
                    " --iterations 2") == 0);
    const HalfEdgeMesh out = load_mesh_file(dir.file("out.ply"));
    CHECK(out.face_count() > 0);
    CHECK(out.validate().is_manifold);
}

TEST_CASE("cli: target-length overrides multi-parameter") {
    TempDir dir;
    const std::string input = dir.file("in.obj");
    save_mesh_file(make_icosphere(3), input);
    // Both flags given: the coarse multi-parameter must be ignored in favor
    // of the fine absolute target, so faces grow versus the input.
    REQUIRE(run_cli("remesh --input " + input + " --output " + dir.file("out.obj") +
                    " --multi-parameter 4.0 --target-length 0.08 --iterations 4 --report " +
                    dir.file("r.json")) == 0);
    const HalfEdgeMesh in_mesh = load_mesh_file(input);
    const HalfEdgeMesh out = load_mesh_file(dir.file("out.obj"));
    CHECK(out.face_count() > in_mesh.face_count());
    const auto j = nlohmann::json::parse(slurp(dir.file("r.json")));
    CHECK(j["run"]["config"]["target_length"].get<double>() == 0.08);
}

TEST_CASE("cli: histogram bins flag controls the row count") {
    TempDir dir;
    const std::string input = dir.file("m.obj");
    save_mesh_file(make_grid_patch(4, 4, 1.0), input);
    REQUIRE(run_cli("histogram --input " + input + " --output " + dir.file("h.csv") +
                    " --bins 18") == 0);
    const std::string csv = slurp(dir.file("h.csv"));
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 19);  // header + 18 rows
    // Equilateral patch: all angles in the [60, 70) bin of 18 bins.
    CHECK(csv.find("60,70,") != std::string::npos);
}

TEST_CASE("cli: ablate emits both branches") {
    TempDir dir;
    const std::string input = dir.file("in.obj");
    save_mesh_file(make_perturbed_icosphere(3, 0.3, 4), input);
    REQUIRE(run_cli("ablate --input " + input + " --output " + dir.file("ab.json") +
                    " --iterations 4") == 0);
    const auto j = nlohmann::json::parse(slurp(dir.file("ab.json")));
    REQUIRE(j.contains("enabled"));
    REQUIRE(j.contains("disabled"));
    for (const char* branch : {"enabled", "disabled"}) {
        CHECK(j[branch].contains("run"));
        CHECK(j[branch].contains("quality"));
        CHECK(j[branch].contains("total_edits"));
        CHECK(j[branch].contains("wall_seconds"));
    }
    CHECK(j["enabled"]["run"]["config"]["angle_opt_enabled"] == true);
    CHECK(j["disabled"]["run"]["config"]["angle_opt_enabled"] == false);
}

TEST_CASE("cli: help lists the documented defaults") {
    TempDir dir;
    const std::string help = cli_path() + " remesh --help > " + dir.file("help.txt") + " 2>&1";
    REQUIRE(std::system(help.c_str()) == 0);
    const std::string text = slurp(dir.file("help.txt"));
    CHECK(text.find("--lambda") != std::string::npos);
    CHECK(text.find("0.5") != std::string::npos);       // lambda default
    CHECK(text.find("--dihedral-epsilon") != std::string::npos);
    CHECK(text.find("20") != std::string::npos);        // epsilon default
    CHECK(text.find("--max-degree") != std::string::npos);
    CHECK(text.find("--weighting") != std::string::npos);
    CHECK(text.find("--multi-parameter") != std::string::npos);
}
