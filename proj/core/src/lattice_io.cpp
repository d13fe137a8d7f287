#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dca/errors.hpp"
#include "dca/lattice.hpp"

namespace dca {

namespace {

// Shortest decimal form that round-trips a double exactly.
std::string number_repr(double x) {
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, x);
        double back = 0.0;
        std::sscanf(buf, "%lf", &back);
        if (back == x) return buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

const char* kind_name(LatticeKind k) {
    switch (k) {
        case LatticeKind::square: return "square";
        case LatticeKind::orthogonal: return "orthogonal";
        default: return "general";
    }
}

LatticeKind kind_from_name(const std::string& s) {
    if (s == "square") return LatticeKind::square;
    if (s == "orthogonal") return LatticeKind::orthogonal;
    if (s == "general") return LatticeKind::general;
    throw ParseError("unknown lattice kind \"" + s + "\"");
}

} // namespace

// Writer is hand-rolled so the byte output is deterministic across platforms:
// object keys in fixed order, shortest round-tripping number strings, one
// vertex/face per line.
std::string lattice_to_json(const QuadLattice& L) {
    std::ostringstream os;
    os << "{\n  \"kind\": \"" << kind_name(L.kind) << "\",\n";
    os << "  \"points\": [\n";
    for (size_t i = 0; i < L.points.size(); ++i)
        os << "    [" << number_repr(L.points[i].x) << ", " << number_repr(L.points[i].y) << "]"
           << (i + 1 < L.points.size() ? "," : "") << "\n";
    os << "  ],\n  \"faces\": [\n";
    for (size_t f = 0; f < L.faces.size(); ++f) {
        const auto& v = L.faces[f].v;
        os << "    [" << v[0] << ", " << v[1] << ", " << v[2] << ", " << v[3] << "]"
           << (f + 1 < L.faces.size() ? "," : "") << "\n";
    }
    os << "  ]\n}\n";
    return os.str();
}

QuadLattice lattice_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("top level must be an object");
    if (!j.contains("points") || !j.contains("faces"))
        throw ParseError("missing \"points\" or \"faces\"");
    if (!j["points"].is_array() || !j["faces"].is_array())
        throw ParseError("\"points\" and \"faces\" must be arrays");

    std::vector<Vec2> pts;
    pts.reserve(j["points"].size());
    for (size_t i = 0; i < j["points"].size(); ++i) {
        const auto& p = j["points"][i];
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
            throw ParseError("point " + std::to_string(i) + " must be [x, y]");
        pts.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    std::vector<std::array<int, 4>> faces;
    faces.reserve(j["faces"].size());
    for (size_t f = 0; f < j["faces"].size(); ++f) {
        const auto& q = j["faces"][f];
        if (!q.is_array() || q.size() != 4)
            throw ParseError("face " + std::to_string(f) + " has wrong arity (need 4 vertices)");
        std::array<int, 4> v{};
        for (int k = 0; k < 4; ++k) {
            if (!q[k].is_number_integer())
                throw ParseError("face " + std::to_string(f) + " entry " + std::to_string(k) +
                                 " is not an integer");
            v[k] = q[k].get<int>();
        }
        faces.push_back(v);
    }
    LatticeKind hint = LatticeKind::general;
    if (j.contains("kind")) {
        if (!j["kind"].is_string()) throw ParseError("\"kind\" must be a string");
        hint = kind_from_name(j["kind"].get<std::string>());
    }
    // make_lattice re-derives orientation, coloring, boundary and h, and
    // throws ValidationError/NotBipartite on structurally bad input.
    QuadLattice L = make_lattice(std::move(pts), faces,
                                 hint == LatticeKind::square ? LatticeKind::square
                                                             : LatticeKind::general);
    if (hint == LatticeKind::orthogonal && L.kind != LatticeKind::orthogonal)
        throw ValidationError("file claims orthogonal diagonals but a face violates the tolerance");
    if (hint == LatticeKind::square) {
        for (int f = 0; f < L.face_count(); ++f) {
            auto p = L.face_points(f);
            double s0 = norm(p[1] - p[0]);
            for (int k = 0; k < 4; ++k) {
                Vec2 a = p[(k + 1) % 4] - p[k];
                Vec2 b = p[(k + 2) % 4] - p[(k + 1) % 4];
                if (std::abs(norm(a) - s0) > 1e-9 * s0 || std::abs(dot(a, b)) > 1e-9 * s0 * s0)
                    throw ValidationError("file claims square cells but face " + std::to_string(f) +
                                          " is not a square");
            }
        }
    }
    return L;
}

void save_lattice(const QuadLattice& L, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << lattice_to_json(L);
    if (!out) throw IoError("failed writing " + path);
}

QuadLattice load_lattice(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return lattice_from_json(ss.str());
}

} // namespace dca
