#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "isoremesh/driver.hpp"
#include "isoremesh/log.hpp"
#include "isoremesh/mesh_io.hpp"
#include "isoremesh/metrics.hpp"
#include "isoremesh/reporting.hpp"

namespace {

using namespace isoremesh;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitBadArgs = 2;
constexpr int kExitBadInput = 3;
constexpr int kExitIo = 4;

struct RemeshFlags {
    std::string input, output, report;
    double multi_parameter = 1.0;
    double target_length = 0.0;  // 0 = derive from multi-parameter
    unsigned iterations = 10;
    double lambda = 0.5;
    double dihedral_epsilon_deg = 20.0;
    unsigned max_degree = 6;
    bool no_angle_opt = false;
    bool no_mls = false;
    std::string weighting = "area";
    std::size_t samples = 0;  // 0 = 100 per vertex, capped at 1e6
    std::uint64_t seed = 0;
};

void add_tuning_flags(CLI::App* cmd, RemeshFlags& f) {
    cmd->add_option("--multi-parameter", f.multi_parameter,
                    "Target length as a multiple of the input's average edge length")
        ->capture_default_str();
    cmd->add_option("--target-length", f.target_length,
                    "Absolute target edge length (overrides --multi-parameter)");
    cmd->add_option("--iterations", f.iterations, "Iteration budget")->capture_default_str();
    cmd->add_option("--lambda", f.lambda, "Tangential smoothing step size")->capture_default_str();
    cmd->add_option("--dihedral-epsilon", f.dihedral_epsilon_deg,
                    "Flip feature-guard dihedral angle in degrees")
        ->capture_default_str();
    cmd->add_option("--max-degree", f.max_degree, "Collapse survivor degree cap")
        ->capture_default_str();
    cmd->add_flag("--no-mls", f.no_mls, "Disable MLS reprojection in the smoothing pass");
    cmd->add_option("--weighting", f.weighting, "Centroid weighting: uniform, area or cotangent")
        ->check(CLI::IsMember({"uniform", "area", "cotangent"}))
        ->capture_default_str();
    cmd->add_option("--samples", f.samples,
                    "Distance-metric sample count (default 100 per vertex, capped at 1e6)");
    cmd->add_option("--seed", f.seed, "Sampling seed")->capture_default_str();
}

RemeshConfig make_config(const RemeshFlags& f, const HalfEdgeMesh& input, bool angle_opt) {
    RemeshConfig cfg;
    cfg.target_length =
        f.target_length > 0.0 ? f.target_length : derive_target_length(input, f.multi_parameter);
    cfg.iterations = f.iterations;
    cfg.lambda = f.lambda;
    cfg.dihedral_eps = radians(f.dihedral_epsilon_deg);
    cfg.max_degree = f.max_degree;
    cfg.angle_opt_enabled = angle_opt;
    cfg.mls_enabled = !f.no_mls;
    cfg.weighting = weighting_from_string(f.weighting);
    cfg.validate();
    return cfg;
}

void write_text(const std::string& path, const std::string& data) {
    if (path.empty()) {
        std::fwrite(data.data(), 1, data.size(), stdout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw IoError("failed writing '" + path + "'");
}

std::size_t sample_budget(const RemeshFlags& f, const HalfEdgeMesh& mesh) {
    return f.samples > 0 ? f.samples : default_sample_count(mesh);
}

int cmd_remesh(const RemeshFlags& f) {
    const HalfEdgeMesh input = load_mesh_file(f.input);
    const RemeshConfig cfg = make_config(f, input, !f.no_angle_opt);
    const RemeshResult result = remesh(input, cfg);
    save_mesh_file(result.mesh, f.output);
    log_info("remeshed " + f.input + ": V " + std::to_string(input.vertex_count()) + " -> " +
             std::to_string(result.mesh.vertex_count()));
    if (!f.report.empty()) {
        const std::size_t n = sample_budget(f, input);
        json j{{"run", to_json(result.report)},
               {"quality", to_json(quality_report(input, result.mesh, n, f.seed))}};
        write_text(f.report, j.dump(2) + "\n");
    }
    return kExitOk;
}

int cmd_metrics(const RemeshFlags& f, const std::string& original_path,
                const std::string& remeshed_path) {
    const HalfEdgeMesh original = load_mesh_file(original_path);
    const HalfEdgeMesh remeshed = load_mesh_file(remeshed_path);
    const std::size_t n = f.samples > 0 ? f.samples : default_sample_count(original);
    const QualityReport report = quality_report(original, remeshed, n, f.seed);
    write_text(f.output, to_json(report).dump(2) + "\n");
    return kExitOk;
}

int cmd_histogram(const RemeshFlags& f, std::size_t bins) {
    const HalfEdgeMesh mesh = load_mesh_file(f.input);
    const AngleStats stats = angle_stats(mesh, bins);
    write_text(f.output, histogram_csv(stats.histogram));
    return kExitOk;
}

int cmd_ablate(const RemeshFlags& f) {
    const HalfEdgeMesh input = load_mesh_file(f.input);
    const std::size_t n = sample_budget(f, input);

    json branches;
    for (const bool enabled : {true, false}) {
        const RemeshConfig cfg = make_config(f, input, enabled);
        const RemeshResult result = remesh(input, cfg);
        branches[enabled ? "enabled" : "disabled"] =
            json{{"run", to_json(result.report)},
                 {"quality", to_json(quality_report(input, result.mesh, n, f.seed))},
                 {"total_edits", result.report.total_edits()},
                 {"wall_seconds", result.report.wall_seconds}};
    }
    write_text(f.output, branches.dump(2) + "\n");
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Isotropic remeshing with inter-angle guarded edits and MLS-constrained smoothing"};
    app.require_subcommand(1);

    RemeshFlags flags;
    std::string original_path, remeshed_path;
    std::size_t bins = 36;

    CLI::App* remesh_cmd =
        app.add_subcommand("remesh", "Remesh a mesh toward uniform, near-equilateral triangles");
    remesh_cmd->add_option("--input", flags.input, "Input mesh (.obj or .ply)")->required();
    remesh_cmd->add_option("--output", flags.output, "Output mesh path")->required();
    remesh_cmd->add_option("--report", flags.report, "Write a run + quality JSON report here");
    remesh_cmd->add_flag("--no-angle-opt", flags.no_angle_opt,
                         "Disable the inter-angle guards (ablation)");
    add_tuning_flags(remesh_cmd, flags);

    CLI::App* metrics_cmd =
        app.add_subcommand("metrics", "Quality report comparing two meshes (JSON)");
    metrics_cmd->add_option("--original", original_path, "Reference mesh")->required();
    metrics_cmd->add_option("--remeshed", remeshed_path, "Evaluated mesh")->required();
    metrics_cmd->add_option("--output", flags.output, "Output path (default: stdout)");
    metrics_cmd->add_option("--samples", flags.samples, "Sample count (default 100 per vertex)");
    metrics_cmd->add_option("--seed", flags.seed, "Sampling seed")->capture_default_str();

    CLI::App* histogram_cmd =
        app.add_subcommand("histogram", "Interior-angle histogram of a mesh (CSV)");
    histogram_cmd->add_option("--input", flags.input, "Input mesh")->required();
    histogram_cmd->add_option("--output", flags.output, "Output path (default: stdout)");
    histogram_cmd->add_option("--bins", bins, "Histogram bin count over [0, 180] degrees")
        ->capture_default_str();

    CLI::App* ablate_cmd = app.add_subcommand(
        "ablate", "Run remeshing with and without the inter-angle guards, report both (JSON)");
    ablate_cmd->add_option("--input", flags.input, "Input mesh")->required();
    ablate_cmd->add_option("--output", flags.output, "Output path (default: stdout)");
    add_tuning_flags(ablate_cmd, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "isoremesh: " << e.what() << "\n";
        return kExitBadArgs;
    }

    try {
        if (remesh_cmd->parsed()) return cmd_remesh(flags);
        if (metrics_cmd->parsed()) return cmd_metrics(flags, original_path, remeshed_path);
        if (histogram_cmd->parsed()) return cmd_histogram(flags, bins);
        if (ablate_cmd->parsed()) return cmd_ablate(flags);
    } catch (const InvalidConfigError& e) {
        std::cerr << "isoremesh: invalid arguments: " << e.what() << "\n";
        return kExitBadArgs;
    } catch (const IoError& e) {
        std::cerr << "isoremesh: I/O failure: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        std::cerr << "isoremesh: invalid input: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::exception& e) {
        std::cerr << "isoremesh: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
