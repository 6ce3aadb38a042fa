#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "isoremesh/half_edge_mesh.hpp"
#include "isoremesh/vec3.hpp"

namespace isoremesh {

enum class WeightingScheme { Uniform, Area, Cotangent };

const char* to_string(WeightingScheme w);
WeightingScheme weighting_from_string(const std::string& name);  // throws InvalidConfigError

// All remeshing tunables. Angles are radians internally; the CLI converts
// from degrees.
struct RemeshConfig {
    double target_length = 1.0;          // l
    double split_factor = 4.0 / 3.0;     // split edges longer than split_factor*l
    double collapse_factor = 4.0 / 5.0;  // collapse edges shorter than collapse_factor*l
    double obtuse_threshold = radians(90.0);
    unsigned max_degree = 6;             // survivor-degree cap for collapses
    double dihedral_eps = radians(20.0); // flip feature guard
    double lambda = 0.5;                 // smoothing step size
    unsigned iterations = 10;
    bool angle_opt_enabled = true;
    bool mls_enabled = true;
    WeightingScheme weighting = WeightingScheme::Area;

    void validate() const;  // throws InvalidConfigError
};

// Machine-readable verdict for a candidate edit.
enum class EditReason {
    Ok,
    LengthNotTriggered,
    ObtuseAdjacent,
    BoundaryEndpoint,
    DegreeExceeded,
    LinkCondition,
    NewObtuse,
    DihedralExceeded,
    NoValenceGain,
    TopologyBlocked,
    GeometryFold,
};

const char* to_string(EditReason r);  // spec wire names, e.g. "LENGTH_NOT_TRIGGERED"

struct EditDecision {
    bool allowed = false;
    EditReason reason = EditReason::TopologyBlocked;

    static EditDecision allow() { return {true, EditReason::Ok}; }
    static EditDecision block(EditReason r) { return {false, r}; }
};

enum class PassKind { Split, Collapse, Flip, Smooth };

const char* to_string(PassKind k);

struct PassStats {
    PassKind kind = PassKind::Split;
    std::size_t candidates = 0;  // performed + sum(blocked)
    std::size_t performed = 0;
    std::map<EditReason, std::size_t> blocked_by_reason;
    double wall_seconds = 0.0;

    // Post-pass element counts, for Euler accounting in reports.
    std::size_t vertices_after = 0;
    std::size_t edges_after = 0;
    std::size_t faces_after = 0;

    // Collapse passes record merged-vertex ids; smooth passes count MLS
    // projections that fell back to the tangent-step position.
    std::vector<Index> collapse_survivors;
    std::size_t mls_fallbacks = 0;

    std::size_t blocked_total() const {
        std::size_t n = 0;
        for (const auto& [r, c] : blocked_by_reason) n += c;
        return n;
    }
};

}  // namespace isoremesh
