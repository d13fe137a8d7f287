#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "dca/geometry.hpp"
#include "dca/lattice.hpp"
#include "dca/operators.hpp"

namespace dca {

struct Triangulation {
    std::vector<Vec2> points;
    std::vector<std::array<int, 3>> triangles; // positively oriented
    std::vector<int> boundary;                 // simple ccw cycle

    int vertex_count() const { return static_cast<int>(points.size()); }
    int triangle_count() const { return static_cast<int>(triangles.size()); }
};

struct DelaunayReport {
    bool is_delaunay = false;
    double min_slack = 0.0; // min over interior edges of pi - (alpha + beta)
    bool regular_boundary = false;
    double condition_d_slack = 0.0; // the same minimum, the quantity entering condition (D)
};

// (cot(alpha) + cot(beta)) / 2; requires both angles in (0, pi).
double cot_weight(double alpha, double beta);

// Opposite-angle slacks over all interior edges plus the boundary-regularity
// flag (every triangle has at most one boundary side, and the angle opposite
// such a side is acute). A mesh with no interior edges is vacuously Delaunay
// with slack pi. Throws DegenerateTriangle on non-positive triangle area.
DelaunayReport delaunay_report(const Triangulation& T);

// Circumcenter of a nondegenerate triangle; throws DegenerateCircumcenter
// when the area falls below 1e-14 * (longest edge)^2.
Vec2 circumcenter(Vec2 a, Vec2 b, Vec2 c);

// Kite transform: B vertices are the triangulation's vertices (same indices),
// W vertices are circumcenters (triangle t becomes vertex n + t), and every
// interior edge turns into one orthogonal face whose conductance equals the
// cotangent weight of the edge. Requires strict Delaunay slack and a regular
// boundary.
QuadLattice build_kite_lattice(const Triangulation& T);

// Piecewise-linear FEM with cotangent weights; boundary_values must cover
// exactly the boundary cycle. Non-Delaunay meshes are accepted with a warning
// on stderr (weights may be negative).
VertexFunction solve_fem(const Triangulation& T, const std::map<int, double>& boundary_values,
                         double tol = 1e-12);

// Max over triangulation vertices of |FEM solution - kite-lattice Dirichlet
// solution| for boundary data g evaluated at boundary points (kite boundary
// data is g at T-vertices and circumcenters along the boundary).
double kite_equivalence(const Triangulation& T, const std::function<double(Vec2)>& g);

// Deterministic seeded test mesh: concentric rings of 8k points at radius
// k/rings around a center vertex, interior rings jittered, outer ring on the
// exact circle, triangulated ring by ring. Delaunay with strict slack and a
// regular boundary for the jitter amplitudes used (verify via
// delaunay_report if in doubt).
Triangulation make_disk_triangulation(int rings, std::uint64_t seed);

std::string triangulation_to_json(const Triangulation& T);
Triangulation triangulation_from_json(const std::string& text);
void save_triangulation(const Triangulation& T, const std::string& path);
Triangulation load_triangulation(const std::string& path);

} // namespace dca
