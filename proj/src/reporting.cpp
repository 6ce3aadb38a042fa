#include "isoremesh/reporting.hpp"

#include <cstdio>

namespace isoremesh {

using nlohmann::json;

nlohmann::json to_json(const RemeshConfig& cfg) {
    return json{{"target_length", cfg.target_length},
                {"split_factor", cfg.split_factor},
                {"collapse_factor", cfg.collapse_factor},
                {"obtuse_threshold_deg", degrees(cfg.obtuse_threshold)},
                {"max_degree", cfg.max_degree},
                {"dihedral_epsilon_deg", degrees(cfg.dihedral_eps)},
                {"lambda", cfg.lambda},
                {"iterations", cfg.iterations},
                {"angle_opt_enabled", cfg.angle_opt_enabled},
                {"mls_enabled", cfg.mls_enabled},
                {"weighting", to_string(cfg.weighting)}};
}

nlohmann::json to_json(const PassStats& stats) {
    json blocked = json::object();
    for (const auto& [reason, count] : stats.blocked_by_reason) blocked[to_string(reason)] = count;
    json j{{"kind", to_string(stats.kind)},
           {"candidates", stats.candidates},
           {"performed", stats.performed},
           {"blocked", blocked},
           {"wall_seconds", stats.wall_seconds},
           {"vertices_after", stats.vertices_after},
           {"edges_after", stats.edges_after},
           {"faces_after", stats.faces_after}};
    if (stats.kind == PassKind::Smooth) j["mls_fallbacks"] = stats.mls_fallbacks;
    return j;
}

nlohmann::json to_json(const RunReport& report) {
    json iterations = json::array();
    for (const auto& it : report.iterations) {
        iterations.push_back(json{{"split", to_json(it.split)},
                                  {"collapse", to_json(it.collapse)},
                                  {"flip", to_json(it.flip)},
                                  {"smooth", to_json(it.smooth)},
                                  {"edits", it.edit_count()}});
    }
    return json{{"config", to_json(report.config)},
                {"initial", json{{"vertices", report.initial_vertices}, {"faces", report.initial_faces}}},
                {"final", json{{"vertices", report.final_vertices}, {"faces", report.final_faces}}},
                {"converged", report.converged},
                {"iterations_run", report.iterations_run},
                {"total_edits", report.total_edits()},
                {"wall_seconds", report.wall_seconds},
                {"iterations", iterations}};
}

nlohmann::json to_json(const QualityReport& report) {
    json histogram = json::array();
    const double width = report.histogram.bin_width_deg();
    for (std::size_t i = 0; i < report.histogram.counts.size(); ++i) {
        histogram.push_back(json{{"bin_start_deg", width * static_cast<double>(i)},
                                 {"bin_end_deg", width * static_cast<double>(i + 1)},
                                 {"count", report.histogram.counts[i]}});
    }
    return json{{"hausdorff", report.hausdorff},
                {"hausdorff_norm", report.hausdorff_norm},
                {"mean_distance", report.mean_dist},
                {"mean_distance_norm", report.mean_dist_norm},
                {"theta_max_deg", report.theta_max_deg},
                {"theta_avg_deg", report.theta_avg_deg},
                {"histogram", histogram},
                {"vertices", report.vertices},
                {"faces", report.faces},
                {"samples", report.samples},
                {"seed", report.seed}};
}

std::string histogram_csv(const AngleHistogram& histogram) {
    std::string out = "bin_start_deg,bin_end_deg,count\n";
    const double width = histogram.bin_width_deg();
    char buf[96];
    for (std::size_t i = 0; i < histogram.counts.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%g,%g,%zu\n", width * static_cast<double>(i),
                      width * static_cast<double>(i + 1), histogram.counts[i]);
        out += buf;
    }
    return out;
}

}  // namespace isoremesh
