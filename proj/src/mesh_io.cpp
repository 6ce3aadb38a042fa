#include "isoremesh/mesh_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "isoremesh/log.hpp"

namespace isoremesh {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

void fan_triangulate(const std::vector<Index>& poly, std::vector<std::array<Index, 3>>& tris,
                     bool& warned) {
    if (poly.size() > 3 && !warned) {
        log_warn("polygon face with " + std::to_string(poly.size()) +
                 " vertices fan-triangulated at its first vertex");
        warned = true;
    }
    for (std::size_t i = 1; i + 1 < poly.size(); ++i)
        tris.push_back({poly[0], poly[i], poly[i + 1]});
}

// ---------------------------------------------------------------------------
// OBJ
// ---------------------------------------------------------------------------

HalfEdgeMesh load_obj(std::istream& in) {
    std::vector<Vec3> positions;
    std::vector<std::array<Index, 3>> tris;
    std::vector<Index> poly;
    bool warned = false;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag[0] == '#') continue;

        if (tag == "v") {
            Vec3 p;
            if (!(ls >> p.x >> p.y >> p.z)) throw ParseError("malformed vertex record", line_no);
            positions.push_back(p);
        } else if (tag == "f") {
            poly.clear();
            std::string token;
            while (ls >> token) {
                // accept i, i/t, i//n, i/t/n; only the position index matters
                const std::size_t slash = token.find('/');
                const std::string head = slash == std::string::npos ? token : token.substr(0, slash);
                long idx = 0;
                try {
                    std::size_t used = 0;
                    idx = std::stol(head, &used);
                    if (used != head.size()) throw std::invalid_argument(head);
                } catch (const std::exception&) {
                    throw ParseError("malformed face index '" + token + "'", line_no);
                }
                if (idx < 0) idx = static_cast<long>(positions.size()) + idx + 1;
                if (idx < 1 || idx > static_cast<long>(positions.size()))
                    throw ParseError("face index " + head + " out of range", line_no);
                poly.push_back(static_cast<Index>(idx - 1));
            }
            if (poly.size() < 3) throw ParseError("face with fewer than 3 vertices", line_no);
            fan_triangulate(poly, tris, warned);
        }
        // vn/vt/usemtl/mtllib/o/g/s/l/p are ignored
    }
    return build_half_edge(positions, tris);
}

// ---------------------------------------------------------------------------
// PLY
// ---------------------------------------------------------------------------

enum class PlyType { I8, U8, I16, U16, I32, U32, F32, F64 };

std::size_t ply_type_size(PlyType t) {
    switch (t) {
        case PlyType::I8: case PlyType::U8: return 1;
        case PlyType::I16: case PlyType::U16: return 2;
        case PlyType::I32: case PlyType::U32: case PlyType::F32: return 4;
        case PlyType::F64: return 8;
    }
    return 0;
}

PlyType ply_type_from(const std::string& name, std::size_t line_no) {
    if (name == "char" || name == "int8") return PlyType::I8;
    if (name == "uchar" || name == "uint8") return PlyType::U8;
    if (name == "short" || name == "int16") return PlyType::I16;
    if (name == "ushort" || name == "uint16") return PlyType::U16;
    if (name == "int" || name == "int32") return PlyType::I32;
    if (name == "uint" || name == "uint32") return PlyType::U32;
    if (name == "float" || name == "float32") return PlyType::F32;
    if (name == "double" || name == "float64") return PlyType::F64;
    throw ParseError("unknown PLY property type '" + name + "'", line_no);
}

struct PlyProperty {
    std::string name;
    PlyType type = PlyType::F32;
    bool is_list = false;
    PlyType count_type = PlyType::U8;
};

struct PlyElement {
    std::string name;
    std::size_t count = 0;
    std::vector<PlyProperty> properties;
};

double read_binary_scalar(std::istream& in, PlyType t) {
    unsigned char buf[8];
    if (!in.read(reinterpret_cast<char*>(buf), static_cast<std::streamsize>(ply_type_size(t))))
        throw ParseError("unexpected end of binary PLY data", 0);
    switch (t) {
        case PlyType::I8: return static_cast<double>(static_cast<std::int8_t>(buf[0]));
        case PlyType::U8: return static_cast<double>(buf[0]);
        case PlyType::I16: { std::int16_t v; std::memcpy(&v, buf, 2); return v; }
        case PlyType::U16: { std::uint16_t v; std::memcpy(&v, buf, 2); return v; }
        case PlyType::I32: { std::int32_t v; std::memcpy(&v, buf, 4); return v; }
        case PlyType::U32: { std::uint32_t v; std::memcpy(&v, buf, 4); return v; }
        case PlyType::F32: { float v; std::memcpy(&v, buf, 4); return v; }
        case PlyType::F64: { double v; std::memcpy(&v, buf, 8); return v; }
    }
    return 0.0;
}

double read_ascii_scalar(std::istream& in, std::size_t line_no) {
    double v;
    if (!(in >> v)) throw ParseError("unexpected end of ascii PLY data", line_no);
    return v;
}

HalfEdgeMesh load_ply(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;

    auto next_line = [&]() -> std::string {
        if (!std::getline(in, line)) throw ParseError("unexpected end of PLY header", line_no);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
    };

    if (next_line() != "ply") throw ParseError("missing 'ply' magic", line_no);

    bool binary = false;
    std::vector<PlyElement> elements;
    while (true) {
        std::istringstream ls(next_line());
        std::string tag;
        ls >> tag;
        if (tag == "comment" || tag == "obj_info" || tag.empty()) continue;
        if (tag == "format") {
            std::string fmt, version;
            ls >> fmt >> version;
            if (fmt == "ascii") binary = false;
            else if (fmt == "binary_little_endian") binary = true;
            else throw ParseError("unsupported PLY format '" + fmt + "'", line_no);
        } else if (tag == "element") {
            PlyElement e;
            if (!(ls >> e.name >> e.count)) throw ParseError("malformed element declaration", line_no);
            elements.push_back(std::move(e));
        } else if (tag == "property") {
            if (elements.empty()) throw ParseError("property before any element", line_no);
            PlyProperty p;
            std::string t1;
            ls >> t1;
            if (t1 == "list") {
                std::string ct, vt;
                if (!(ls >> ct >> vt >> p.name)) throw ParseError("malformed list property", line_no);
                p.is_list = true;
                p.count_type = ply_type_from(ct, line_no);
                p.type = ply_type_from(vt, line_no);
            } else {
                p.type = ply_type_from(t1, line_no);
                if (!(ls >> p.name)) throw ParseError("malformed property", line_no);
            }
            elements.back().properties.push_back(std::move(p));
        } else if (tag == "end_header") {
            break;
        } else {
            throw ParseError("unknown PLY header line '" + tag + "'", line_no);
        }
    }

    std::vector<Vec3> positions;
    std::vector<std::array<Index, 3>> tris;
    std::vector<Index> poly;
    bool warned = false;

    auto scalar = [&](PlyType t) {
        return binary ? read_binary_scalar(in, t) : read_ascii_scalar(in, line_no);
    };

    for (const PlyElement& e : elements) {
        const bool is_vertex = e.name == "vertex";
        const bool is_face = e.name == "face";
        int xi = -1, yi = -1, zi = -1, li = -1;
        for (std::size_t i = 0; i < e.properties.size(); ++i) {
            const auto& p = e.properties[i];
            if (is_vertex && !p.is_list) {
                if (p.name == "x") xi = static_cast<int>(i);
                if (p.name == "y") yi = static_cast<int>(i);
                if (p.name == "z") zi = static_cast<int>(i);
            }
            if (is_face && p.is_list && (p.name == "vertex_indices" || p.name == "vertex_index"))
                li = static_cast<int>(i);
        }
        if (is_vertex && (xi < 0 || yi < 0 || zi < 0))
            throw ParseError("vertex element missing x/y/z properties", line_no);
        if (is_face && li < 0)
            throw ParseError("face element missing vertex index list", line_no);

        for (std::size_t n = 0; n < e.count; ++n) {
            Vec3 pos;
            poly.clear();
            for (std::size_t i = 0; i < e.properties.size(); ++i) {
                const auto& p = e.properties[i];
                if (p.is_list) {
                    const auto cnt = static_cast<std::size_t>(scalar(p.count_type));
                    for (std::size_t k = 0; k < cnt; ++k) {
                        const double v = scalar(p.type);
                        if (is_face && static_cast<int>(i) == li) {
                            if (v < 0 || v >= static_cast<double>(positions.size()))
                                throw ParseError("face vertex index out of range", line_no);
                            poly.push_back(static_cast<Index>(v));
                        }
                    }
                } else {
                    const double v = scalar(p.type);
                    if (static_cast<int>(i) == xi) pos.x = v;
                    if (static_cast<int>(i) == yi) pos.y = v;
                    if (static_cast<int>(i) == zi) pos.z = v;
                }
            }
            if (is_vertex) positions.push_back(pos);
            if (is_face) {
                if (poly.size() < 3) throw ParseError("face with fewer than 3 vertices", line_no);
                fan_triangulate(poly, tris, warned);
            }
        }
    }
    return build_half_edge(positions, tris);
}

}  // namespace

// ---------------------------------------------------------------------------
// public surface
// ---------------------------------------------------------------------------

MeshFormat format_from_path(const std::string& path) {
    const auto dotpos = path.find_last_of('.');
    const std::string ext = dotpos == std::string::npos ? "" : lower(path.substr(dotpos + 1));
    if (ext == "obj") return MeshFormat::Obj;
    if (ext == "ply") return MeshFormat::Ply;
    throw IoError("cannot infer mesh format from path '" + path + "' (expected .obj or .ply)");
}

HalfEdgeMesh load_mesh(std::istream& in, MeshFormat format) {
    return format == MeshFormat::Obj ? load_obj(in) : load_ply(in);
}

HalfEdgeMesh load_mesh_file(const std::string& path) {
    const MeshFormat format = format_from_path(path);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return load_mesh(in, format);
}

namespace {

void append_number(std::string& out, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    out += buf;
}

}  // namespace

std::string save_mesh(const HalfEdgeMesh& mesh, MeshFormat format) {
    // Stable compaction: live vertices keep their relative (ascending id) order.
    std::vector<Index> vertex_map(mesh.vertex_capacity(), kInvalidIndex);
    std::vector<Index> live_vertices;
    live_vertices.reserve(mesh.vertex_count());
    for (Index v = 0; v < mesh.vertex_capacity(); ++v) {
        if (!mesh.vertex_alive(v)) continue;
        vertex_map[v] = static_cast<Index>(live_vertices.size());
        live_vertices.push_back(v);
    }
    const auto faces = mesh.face_list();

    std::string out;
    out.reserve(live_vertices.size() * 40 + faces.size() * 24 + 256);

    if (format == MeshFormat::Obj) {
        for (Index v : live_vertices) {
            const Vec3& p = mesh.position(v);
            out += "v ";
            append_number(out, p.x); out += ' ';
            append_number(out, p.y); out += ' ';
            append_number(out, p.z); out += '\n';
        }
        for (const auto& f : faces) {
            out += "f " + std::to_string(vertex_map[f[0]] + 1) + ' ' +
                   std::to_string(vertex_map[f[1]] + 1) + ' ' +
                   std::to_string(vertex_map[f[2]] + 1) + '\n';
        }
    } else {
        out += "ply\nformat ascii 1.0\n";
        out += "element vertex " + std::to_string(live_vertices.size()) + '\n';
        out += "property double x\nproperty double y\nproperty double z\n";
        out += "element face " + std::to_string(faces.size()) + '\n';
        out += "property list uchar int vertex_indices\nend_header\n";
        for (Index v : live_vertices) {
            const Vec3& p = mesh.position(v);
            append_number(out, p.x); out += ' ';
            append_number(out, p.y); out += ' ';
            append_number(out, p.z); out += '\n';
        }
        for (const auto& f : faces) {
            out += "3 " + std::to_string(vertex_map[f[0]]) + ' ' +
                   std::to_string(vertex_map[f[1]]) + ' ' +
                   std::to_string(vertex_map[f[2]]) + '\n';
        }
    }
    return out;
}

void save_mesh(const HalfEdgeMesh& mesh, std::ostream& out, MeshFormat format) {
    const std::string data = save_mesh(mesh, format);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw IoError("failed writing mesh data");
}

void save_mesh_file(const HalfEdgeMesh& mesh, const std::string& path) {
    const MeshFormat format = format_from_path(path);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    save_mesh(mesh, out, format);
}

}  // namespace isoremesh
