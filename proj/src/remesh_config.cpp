#include "isoremesh/remesh_config.hpp"

#include "isoremesh/errors.hpp"

namespace isoremesh {

const char* to_string(WeightingScheme w) {
    switch (w) {
        case WeightingScheme::Uniform: return "uniform";
        case WeightingScheme::Area: return "area";
        case WeightingScheme::Cotangent: return "cotangent";
    }
    return "?";
}

WeightingScheme weighting_from_string(const std::string& name) {
    if (name == "uniform") return WeightingScheme::Uniform;
    if (name == "area") return WeightingScheme::Area;
    if (name == "cotangent") return WeightingScheme::Cotangent;
    throw InvalidConfigError("unknown weighting scheme '" + name + "'");
}

const char* to_string(EditReason r) {
    switch (r) {
        case EditReason::Ok: return "OK";
        case EditReason::LengthNotTriggered: return "LENGTH_NOT_TRIGGERED";
        case EditReason::ObtuseAdjacent: return "OBTUSE_ADJACENT";
        case EditReason::BoundaryEndpoint: return "BOUNDARY_ENDPOINT";
        case EditReason::DegreeExceeded: return "DEGREE_EXCEEDED";
        case EditReason::LinkCondition: return "LINK_CONDITION";
        case EditReason::NewObtuse: return "NEW_OBTUSE";
        case EditReason::DihedralExceeded: return "DIHEDRAL_EXCEEDED";
        case EditReason::NoValenceGain: return "NO_VALENCE_GAIN";
        case EditReason::TopologyBlocked: return "TOPOLOGY_BLOCKED";
        case EditReason::GeometryFold: return "GEOMETRY_FOLD";
    }
    return "?";
}

const char* to_string(PassKind k) {
    switch (k) {
        case PassKind::Split: return "split";
        case PassKind::Collapse: return "collapse";
        case PassKind::Flip: return "flip";
        case PassKind::Smooth: return "smooth";
    }
    return "?";
}

void RemeshConfig::validate() const {
    if (!(target_length > 0.0)) throw InvalidConfigError("target_length must be > 0");
    if (!(split_factor > 1.0)) throw InvalidConfigError("split_factor must be > 1");
    if (!(collapse_factor > 0.0 && collapse_factor < 1.0))
        throw InvalidConfigError("collapse_factor must be in (0,1)");
    if (!(lambda > 0.0 && lambda <= 1.0)) throw InvalidConfigError("lambda must be in (0,1]");
    if (!(dihedral_eps > 0.0 && dihedral_eps < radians(180.0)))
        throw InvalidConfigError("dihedral epsilon must be in (0,180) degrees");
    if (!(obtuse_threshold > 0.0 && obtuse_threshold <= radians(180.0)))
        throw InvalidConfigError("obtuse threshold must be in (0,180] degrees");
    if (max_degree < 3) throw InvalidConfigError("max_degree must be at least 3");
}

}  // namespace isoremesh
