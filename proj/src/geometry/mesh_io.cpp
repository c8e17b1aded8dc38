#include "scenekit/errors.hpp"
#include "scenekit/geometry/mesh.hpp"

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace scenekit {

namespace {

// Resolves an OBJ index (1-based, negative counts from the end).
std::uint32_t obj_index(long idx, std::size_t nv, const std::string& path) {
    long resolved = idx > 0 ? idx - 1 : static_cast<long>(nv) + idx;
    if (resolved < 0 || resolved >= static_cast<long>(nv))
        fail(ErrorCode::Parse, path + ": face index " + std::to_string(idx) + " out of range");
    return static_cast<std::uint32_t>(resolved);
}

TriangleMesh load_obj(std::ifstream& in, const std::string& path) {
    std::vector<Vec3> vertices;
    std::vector<std::array<std::uint32_t, 3>> faces;
    std::string line;
    while (std::getline(in, line)) {
        if (line.size() < 2) continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "v") {
            Vec3 v;
            if (!(ls >> v.x() >> v.y() >> v.z()))
                fail(ErrorCode::Parse, path + ": malformed vertex line: " + line);
            vertices.push_back(v);
        } else if (tag == "f") {
            std::vector<std::uint32_t> poly;
            std::string tok;
            while (ls >> tok) {
                // "i", "i/j", "i//k", "i/j/k" -- only the vertex index matters.
                std::size_t slash = tok.find('/');
                std::string head = slash == std::string::npos ? tok : tok.substr(0, slash);
                long idx = 0;
                try {
                    idx = std::stol(head);
                } catch (const std::exception&) {
                    fail(ErrorCode::Parse, path + ": malformed face token: " + tok);
                }
                poly.push_back(obj_index(idx, vertices.size(), path));
            }
            if (poly.size() < 3)
                fail(ErrorCode::Parse, path + ": face with fewer than 3 vertices");
            for (std::size_t i = 2; i < poly.size(); ++i)
                faces.push_back({poly[0], poly[i - 1], poly[i]});
        }
    }
    if (faces.empty()) fail(ErrorCode::EmptyMesh, path + ": no faces");
    return TriangleMesh(std::move(vertices), std::move(faces));
}

struct PlyProperty {
    std::string type;
    std::string name;
    bool is_list = false;
    std::string count_type;
};

std::size_t ply_type_size(const std::string& t, const std::string& path) {
    if (t == "char" || t == "uchar" || t == "int8" || t == "uint8") return 1;
    if (t == "short" || t == "ushort" || t == "int16" || t == "uint16") return 2;
    if (t == "int" || t == "uint" || t == "int32" || t == "uint32" || t == "float" || t == "float32") return 4;
    if (t == "double" || t == "float64") return 8;
    fail(ErrorCode::Parse, path + ": unknown ply type " + t);
}

double ply_read_binary(std::ifstream& in, const std::string& type, const std::string& path) {
    unsigned char buf[8];
    std::size_t n = ply_type_size(type, path);
    in.read(reinterpret_cast<char*>(buf), static_cast<std::streamsize>(n));
    if (!in) fail(ErrorCode::Parse, path + ": truncated ply payload");
    // Little-endian payloads only; the header check rejects big-endian files.
    if (type == "float" || type == "float32") {
        float f;
        std::memcpy(&f, buf, 4);
        return f;
    }
    if (type == "double" || type == "float64") {
        double d;
        std::memcpy(&d, buf, 8);
        return d;
    }
    std::uint64_t u = 0;
    for (std::size_t i = 0; i < n; ++i) u |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    bool is_signed = type[0] == 'c' || type[0] == 's' || (type[0] == 'i');
    if (is_signed) {
        switch (n) {
            case 1: return static_cast<std::int8_t>(u);
            case 2: return static_cast<std::int16_t>(u);
            case 4: return static_cast<std::int32_t>(u);
            default: return static_cast<double>(u);
        }
    }
    return static_cast<double>(u);
}

TriangleMesh load_ply(std::ifstream& in, const std::string& path) {
    std::string line;
    std::getline(in, line); // "ply" already verified by caller
    bool binary = false;
    bool header_done = false;
    struct Element {
        std::string name;
        std::size_t count = 0;
        std::vector<PlyProperty> props;
    };
    std::vector<Element> elements;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "format") {
            std::string fmt;
            ls >> fmt;
            if (fmt == "binary_little_endian") binary = true;
            else if (fmt == "ascii") binary = false;
            else fail(ErrorCode::Parse, path + ": unsupported ply format " + fmt);
        } else if (tag == "element") {
            Element e;
            ls >> e.name >> e.count;
            elements.push_back(e);
        } else if (tag == "property") {
            if (elements.empty()) fail(ErrorCode::Parse, path + ": property before element");
            PlyProperty p;
            std::string t;
            ls >> t;
            if (t == "list") {
                p.is_list = true;
                ls >> p.count_type >> p.type >> p.name;
            } else {
                p.type = t;
                ls >> p.name;
            }
            elements.back().props.push_back(p);
        } else if (tag == "end_header") {
            header_done = true;
            break;
        } else if (tag != "comment" && tag != "obj_info" && tag != "ply") {
            fail(ErrorCode::Parse, path + ": unexpected header line: " + line);
        }
    }
    if (!header_done) fail(ErrorCode::Parse, path + ": missing end_header");

    std::vector<Vec3> vertices;
    std::vector<std::array<std::uint32_t, 3>> faces;

    auto read_scalar = [&](const std::string& type) -> double {
        if (binary) return ply_read_binary(in, type, path);
        double v;
        if (!(in >> v)) fail(ErrorCode::Parse, path + ": truncated ply payload");
        return v;
    };

    for (const auto& e : elements) {
        if (e.name == "vertex") {
            vertices.reserve(e.count);
            for (std::size_t i = 0; i < e.count; ++i) {
                Vec3 v = Vec3::Zero();
                for (const auto& p : e.props) {
                    double s = read_scalar(p.type);
                    if (p.name == "x") v.x() = s;
                    else if (p.name == "y") v.y() = s;
                    else if (p.name == "z") v.z() = s;
                }
                vertices.push_back(v);
            }
        } else if (e.name == "face") {
            for (std::size_t i = 0; i < e.count; ++i) {
                for (const auto& p : e.props) {
                    if (!p.is_list) {
                        read_scalar(p.type);
                        continue;
                    }
                    std::size_t n = static_cast<std::size_t>(read_scalar(p.count_type));
                    std::vector<long> poly(n);
                    for (std::size_t k = 0; k < n; ++k)
                        poly[k] = static_cast<long>(read_scalar(p.type));
                    if (n < 3) fail(ErrorCode::Parse, path + ": face with fewer than 3 vertices");
                    for (std::size_t k = 2; k < n; ++k) {
                        std::array<std::uint32_t, 3> tri;
                        for (int j = 0; j < 3; ++j) {
                            long idx = j == 0 ? poly[0] : (j == 1 ? poly[k - 1] : poly[k]);
                            if (idx < 0 || idx >= static_cast<long>(vertices.size()))
                                fail(ErrorCode::Parse, path + ": face index out of range");
                            tri[j] = static_cast<std::uint32_t>(idx);
                        }
                        faces.push_back(tri);
                    }
                }
            }
        } else {
            // Skip unknown elements payload-accurately.
            for (std::size_t i = 0; i < e.count; ++i) {
                for (const auto& p : e.props) {
                    if (p.is_list) {
                        std::size_t n = static_cast<std::size_t>(read_scalar(p.count_type));
                        for (std::size_t k = 0; k < n; ++k) read_scalar(p.type);
                    } else {
                        read_scalar(p.type);
                    }
                }
            }
        }
    }
    if (faces.empty()) fail(ErrorCode::EmptyMesh, path + ": no faces");
    return TriangleMesh(std::move(vertices), std::move(faces));
}

} // namespace

TriangleMesh load_mesh(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::Io, "cannot open mesh file: " + path);
    char magic[3] = {0, 0, 0};
    in.read(magic, 3);
    in.seekg(0);
    if (magic[0] == 'p' && magic[1] == 'l' && magic[2] == 'y') return load_ply(in, path);
    return load_obj(in, path);
}

void save_obj(const TriangleMesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::Io, "cannot write mesh file: " + path);
    out.precision(17);
    for (const Vec3& v : mesh.vertices())
        out << "v " << v.x() << " " << v.y() << " " << v.z() << "\n";
    for (const auto& f : mesh.faces())
        out << "f " << f[0] + 1 << " " << f[1] + 1 << " " << f[2] + 1 << "\n";
    if (!out) fail(ErrorCode::Io, "write failed: " + path);
}

} // namespace scenekit
