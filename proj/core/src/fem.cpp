#include "dca/fem.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dca/errors.hpp"
#include "dca/linalg.hpp"
#include "dca/solver.hpp"

namespace dca {

namespace {

double corner_angle(Vec2 at, Vec2 b, Vec2 c) {
    Vec2 u = b - at, v = c - at;
    return std::atan2(std::abs(cross(u, v)), dot(u, v));
}

struct EdgeUse {
    int tri;
    int opposite; // vertex of `tri` across from the edge
};

// Structural checks shared by delaunay_report and the JSON loader. Returns
// the undirected edge table.
std::map<std::pair<int, int>, std::vector<EdgeUse>> check_triangulation(const Triangulation& T) {
    const int n = T.vertex_count();
    if (n < 3 || T.triangles.empty()) throw ValidationError("triangulation is empty");
    for (int i = 0; i < n; ++i)
        if (!std::isfinite(T.points[i].x) || !std::isfinite(T.points[i].y))
            throw ValidationError("vertex " + std::to_string(i) + " has non-finite coordinates");

    std::map<std::pair<int, int>, std::vector<EdgeUse>> edges;
    for (int t = 0; t < T.triangle_count(); ++t) {
        const auto& tr = T.triangles[t];
        for (int k = 0; k < 3; ++k)
            if (tr[k] < 0 || tr[k] >= n)
                throw ValidationError("triangle " + std::to_string(t) + ": index out of range");
        if (tr[0] == tr[1] || tr[1] == tr[2] || tr[0] == tr[2])
            throw DegenerateTriangle("triangle " + std::to_string(t) + ": repeated vertex");
        double area2 = cross(T.points[tr[1]] - T.points[tr[0]], T.points[tr[2]] - T.points[tr[0]]);
        if (!(area2 > 0.0))
            throw DegenerateTriangle("triangle " + std::to_string(t) +
                                     ": non-positive orientation or zero area");
        for (int k = 0; k < 3; ++k) {
            int a = tr[k], b = tr[(k + 1) % 3];
            edges[{std::min(a, b), std::max(a, b)}].push_back({t, tr[(k + 2) % 3]});
        }
    }
    std::set<std::pair<int, int>> boundary_edges;
    for (const auto& [e, uses] : edges) {
        if (uses.size() > 2)
            throw ValidationError("edge (" + std::to_string(e.first) + "," +
                                  std::to_string(e.second) + ") belongs to " +
                                  std::to_string(uses.size()) + " triangles");
        if (uses.size() == 1) boundary_edges.insert(e);
    }
    if (T.boundary.size() != boundary_edges.size())
        throw ValidationError("boundary cycle length does not match the once-used edges");
    std::set<int> seen;
    for (size_t i = 0; i < T.boundary.size(); ++i) {
        int a = T.boundary[i], b = T.boundary[(i + 1) % T.boundary.size()];
        if (a < 0 || a >= n) throw ValidationError("boundary index out of range");
        if (!seen.insert(a).second)
            throw ValidationError("boundary revisits vertex " + std::to_string(a));
        if (!boundary_edges.count({std::min(a, b), std::max(a, b)}))
            throw ValidationError("boundary step (" + std::to_string(a) + "," + std::to_string(b) +
                                  ") is not a once-used edge");
    }
    return edges;
}

} // namespace

double cot_weight(double alpha, double beta) {
    if (!(alpha > 0.0) || !(alpha < kPi) || !(beta > 0.0) || !(beta < kPi))
        throw std::invalid_argument("angles must lie strictly between 0 and pi");
    return 0.5 * (std::cos(alpha) / std::sin(alpha) + std::cos(beta) / std::sin(beta));
}

DelaunayReport delaunay_report(const Triangulation& T) {
    auto edges = check_triangulation(T);

    DelaunayReport rep;
    rep.min_slack = kPi; // vacuous when there are no interior edges
    std::map<int, int> boundary_sides_of; // triangle -> count
    bool boundary_angles_acute = true;
    for (const auto& [e, uses] : edges) {
        if (uses.size() == 2) {
            double alpha = corner_angle(T.points[uses[0].opposite], T.points[e.first],
                                        T.points[e.second]);
            double beta = corner_angle(T.points[uses[1].opposite], T.points[e.first],
                                       T.points[e.second]);
            rep.min_slack = std::min(rep.min_slack, kPi - alpha - beta);
        } else {
            boundary_sides_of[uses[0].tri]++;
            double opp = corner_angle(T.points[uses[0].opposite], T.points[e.first],
                                      T.points[e.second]);
            if (!(opp < kPi / 2)) boundary_angles_acute = false;
        }
    }
    rep.condition_d_slack = rep.min_slack;
    rep.is_delaunay = rep.min_slack >= -1e-12;
    rep.regular_boundary = boundary_angles_acute;
    for (const auto& [t, cnt] : boundary_sides_of)
        if (cnt > 1) rep.regular_boundary = false;
    return rep;
}

Vec2 circumcenter(Vec2 a, Vec2 b, Vec2 c) {
    Vec2 u = b - a, v = c - a;
    double d = 2.0 * cross(u, v);
    double longest2 = std::max({norm2(u), norm2(v), norm2(v - u)});
    if (std::abs(cross(u, v)) < 2e-14 * longest2) // area < 1e-14 * (longest edge)^2
        throw DegenerateCircumcenter("triangle is too close to collinear");
    double ux = (v.y * norm2(u) - u.y * norm2(v)) / d;
    double uy = (u.x * norm2(v) - v.x * norm2(u)) / d;
    return {a.x + ux, a.y + uy};
}

QuadLattice build_kite_lattice(const Triangulation& T) {
    DelaunayReport rep = delaunay_report(T);
    if (!rep.is_delaunay || !(rep.min_slack > 0.0))
        throw NotDelaunay("kite transform needs strictly positive opposite-angle slack (got " +
                          std::to_string(rep.min_slack) + ")");
    if (!rep.regular_boundary)
        throw IrregularBoundary("kite transform needs a regular boundary");

    const int n = T.vertex_count();
    std::vector<Vec2> pts = T.points;
    pts.reserve(n + T.triangle_count());
    for (const auto& tr : T.triangles)
        pts.push_back(circumcenter(T.points[tr[0]], T.points[tr[1]], T.points[tr[2]]));

    // One face per interior edge; the deterministic edge order comes from the
    // sorted edge table.
    auto edges = check_triangulation(T);
    std::vector<std::array<int, 4>> faces;
    for (const auto& [e, uses] : edges)
        if (uses.size() == 2)
            faces.push_back({e.first, n + uses[0].tri, e.second, n + uses[1].tri});
    if (faces.empty()) throw NotDelaunay("mesh has no interior edges; kite lattice is empty");
    return make_lattice(std::move(pts), faces);
}

VertexFunction solve_fem(const Triangulation& T, const std::map<int, double>& boundary_values,
                         double tol) {
    DelaunayReport rep = delaunay_report(T);
    if (!rep.is_delaunay)
        std::cerr << "warning: mesh is not Delaunay (slack " << rep.min_slack
                  << "); cotangent weights may be negative\n";

    const int n = T.vertex_count();
    std::vector<char> is_boundary(n, 0);
    for (int v : T.boundary) is_boundary[v] = 1;
    if (boundary_values.size() != T.boundary.size())
        throw InconsistentBoundaryData("expected one value per boundary vertex");
    for (int v : T.boundary)
        if (!boundary_values.count(v))
            throw InconsistentBoundaryData("no boundary value for vertex " + std::to_string(v));

    TripletBuilder tb(n);
    for (const auto& tr : T.triangles)
        for (int k = 0; k < 3; ++k) {
            int a = tr[k], b = tr[(k + 1) % 3], opp = tr[(k + 2) % 3];
            double ang = corner_angle(T.points[opp], T.points[a], T.points[b]);
            double w = 0.5 * std::cos(ang) / std::sin(ang);
            tb.add(a, a, w);
            tb.add(b, b, w);
            tb.add(a, b, -w);
            tb.add(b, a, -w);
        }
    SparseSym K = tb.compress();

    VertexFunction u(n, 0.0);
    for (const auto& [v, g] : boundary_values) u[v] = g;
    std::vector<int> interior;
    for (int v = 0; v < n; ++v)
        if (!is_boundary[v]) interior.push_back(v);
    if (!interior.empty()) {
        std::vector<double> ku = K.multiply(u);
        std::vector<double> b(interior.size());
        for (size_t i = 0; i < interior.size(); ++i) b[i] = -ku[interior[i]];
        SparseSym A = K.submatrix(interior);
        std::vector<double> x(interior.size(), 0.0);
        if (static_cast<int>(interior.size()) < kDenseSolveThreshold) {
            x = dense_spd_solve(A, b);
        } else {
            CgResult cg = pcg_jacobi(A, b, x, tol, 20 * static_cast<int>(interior.size()));
            if (!cg.converged)
                throw SolverDiverged("FEM solve hit the iteration cap at relative residual " +
                                     std::to_string(cg.residual));
        }
        for (size_t i = 0; i < interior.size(); ++i) u[interior[i]] = x[i];
    }
    return u;
}

double kite_equivalence(const Triangulation& T, const std::function<double(Vec2)>& g) {
    QuadLattice Q = build_kite_lattice(T);

    std::map<int, double> fem_bv;
    for (int v : T.boundary) fem_bv[v] = g(T.points[v]);
    std::map<int, double> kite_bv;
    for (int v : Q.boundary) kite_bv[v] = g(Q.points[v]);

    VertexFunction u_fem = solve_fem(T, fem_bv);
    SolveReport kite = solve_dirichlet(Q, kite_bv);
    double worst = 0.0;
    for (int v = 0; v < T.vertex_count(); ++v)
        worst = std::max(worst, std::abs(u_fem[v] - kite.solution[v]));
    return worst;
}

std::string triangulation_to_json(const Triangulation& T) {
    std::ostringstream os;
    os << "{\n  \"points\": [\n";
    for (size_t i = 0; i < T.points.size(); ++i) {
        char buf[80];
        std::snprintf(buf, sizeof buf, "    [%.17g, %.17g]%s\n", T.points[i].x, T.points[i].y,
                      i + 1 < T.points.size() ? "," : "");
        os << buf;
    }
    os << "  ],\n  \"triangles\": [\n";
    for (size_t t = 0; t < T.triangles.size(); ++t)
        os << "    [" << T.triangles[t][0] << ", " << T.triangles[t][1] << ", " << T.triangles[t][2]
           << "]" << (t + 1 < T.triangles.size() ? "," : "") << "\n";
    os << "  ],\n  \"boundary\": [";
    for (size_t i = 0; i < T.boundary.size(); ++i)
        os << T.boundary[i] << (i + 1 < T.boundary.size() ? ", " : "");
    os << "]\n}\n";
    return os.str();
}

Triangulation triangulation_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("points") || !j.contains("triangles") ||
        !j.contains("boundary"))
        throw ParseError("need object with \"points\", \"triangles\", \"boundary\"");
    Triangulation T;
    for (size_t i = 0; i < j["points"].size(); ++i) {
        const auto& p = j["points"][i];
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
            throw ParseError("point " + std::to_string(i) + " must be [x, y]");
        T.points.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    for (size_t t = 0; t < j["triangles"].size(); ++t) {
        const auto& q = j["triangles"][t];
        if (!q.is_array() || q.size() != 3)
            throw ParseError("triangle " + std::to_string(t) + " has wrong arity (need 3 vertices)");
        std::array<int, 3> tr{};
        for (int k = 0; k < 3; ++k) {
            if (!q[k].is_number_integer())
                throw ParseError("triangle " + std::to_string(t) + " entry " + std::to_string(k) +
                                 " is not an integer");
            tr[k] = q[k].get<int>();
        }
        T.triangles.push_back(tr);
    }
    for (const auto& b : j["boundary"]) {
        if (!b.is_number_integer()) throw ParseError("boundary entries must be integers");
        T.boundary.push_back(b.get<int>());
    }
    check_triangulation(T); // throws on structural problems
    return T;
}

void save_triangulation(const Triangulation& T, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << triangulation_to_json(T);
    if (!out) throw IoError("failed writing " + path);
}

Triangulation load_triangulation(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return triangulation_from_json(ss.str());
}

} // namespace dca
