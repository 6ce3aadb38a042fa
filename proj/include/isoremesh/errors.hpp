#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace isoremesh {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input stream (OBJ/PLY). `line` is 1-based; 0 when unknown (binary offset errors).
struct ParseError : Error {
    ParseError(const std::string& msg, std::size_t line_no)
        : Error("parse error at line " + std::to_string(line_no) + ": " + msg), line(line_no) {}
    std::size_t line;
};

struct IoError : Error {
    using Error::Error;
};

// Input faces are not consistently wound (same directed edge used twice).
struct OrientationError : Error {
    using Error::Error;
};

struct StaleHandleError : Error {
    using Error::Error;
};

struct DegenerateGeometryError : Error {
    using Error::Error;
};

// Topology-editing primitive refused: the edit would break manifoldness.
struct BlockedTopologyError : Error {
    using Error::Error;
};

// Topology-editing primitive refused: the edit would fold or degenerate geometry.
struct BlockedGeometryError : Error {
    using Error::Error;
};

// MLS query point has no cloud samples within reach.
struct OutOfDomainError : Error {
    using Error::Error;
};

struct EmptyInputError : Error {
    using Error::Error;
};

struct InvalidConfigError : Error {
    using Error::Error;
};

}  // namespace isoremesh
