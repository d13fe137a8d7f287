#pragma once

#include <array>
#include <string>
#include <vector>

#include "dca/geometry.hpp"

namespace dca {

enum class LatticeKind { square, orthogonal, general };
enum class Color : unsigned char { B, W };

// A quadrilateral face in normalized cyclic order: counterclockwise
// (positive shoelace), with v[0] and v[2] on the B diagonal and v[0] the
// smaller-indexed of the two B corners.
struct Face {
    std::array<int, 4> v{};
    double area = 0.0; // cached shoelace of the stored order

    bool operator==(const Face&) const = default;
};

struct QuadLattice {
    std::vector<Vec2> points;
    std::vector<Face> faces;
    std::vector<int> boundary;  // simple closed cycle, ccw, starting at its
                                // smallest vertex index
    std::vector<Color> color;   // per-vertex B/W tag
    double h = 0.0;             // twice the maximal edge (side) length
    LatticeKind kind = LatticeKind::general;

    int vertex_count() const { return static_cast<int>(points.size()); }
    int face_count() const { return static_cast<int>(faces.size()); }
    Complex z(int i) const { return to_complex(points[i]); }
    std::array<Vec2, 4> face_points(int f) const {
        const auto& q = faces[f].v;
        return {points[q[0]], points[q[1]], points[q[2]], points[q[3]]};
    }
    // boundary_mask()[i] is 1 iff vertex i lies on the boundary cycle.
    std::vector<char> boundary_mask() const;
};

// Axis-aligned rectangle or disk region used by builders and studies.
struct Domain {
    enum class Shape { rect, disk };
    Shape shape = Shape::rect;
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0; // rect corners
    double cx = 0, cy = 0, r = 0;          // disk center/radius

    static Domain rect(double x0, double y0, double x1, double y1);
    static Domain disk(double cx, double cy, double r);
    bool contains(Vec2 p) const;           // closed containment, small slack
    double boundary_distance(Vec2 p) const; // distance from p to the boundary curve
};

// Checked constructor: takes raw vertex/face data, normalizes every face
// (ccw order, B diagonal in positions 0/2, smaller B index first), computes
// the bipartition, traces the boundary cycle, and fills h and kind. The kind
// is `hint` if given as square, otherwise detected as orthogonal/general.
// Throws ValidationError / NotBipartite on structurally broken input.
QuadLattice make_lattice(std::vector<Vec2> points,
                         const std::vector<std::array<int, 4>>& raw_faces,
                         LatticeKind hint = LatticeKind::general);

// All axis-aligned square cells of side `step` whose closed cell lies inside
// the domain. Grid anchored at the rectangle corner / disk center.
QuadLattice build_square_lattice(const Domain& domain, double step);

struct Violation {
    std::string code;    // short machine-checkable tag
    std::string message; // human-readable, includes offending indices
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

// Reports every violated lattice invariant; never throws.
ValidationReport validate(const QuadLattice& L);

struct BipartitionResult {
    std::vector<Color> color;
    std::vector<int> b_vertices, w_vertices;
    bool b_connected = false; // diagonal graph on B
    bool w_connected = false;
};

// Recomputes the canonical 2-coloring from the face structure (positions 0,2
// vs 1,3). Per connected component, B is the class holding the smallest
// vertex index. Throws NotBipartite when no consistent coloring exists.
BipartitionResult bipartition(const QuadLattice& L);

struct EccentricityReport {
    double max_diag_ratio = 1.0;
    double min_diag_angle = 0.0; // acute-normalized angle between diagonal lines
    int max_disk_count = 1;
    double e = 1.0; // max(max_diag_ratio, 1/min_diag_angle, max_disk_count)
};

EccentricityReport eccentricity(const QuadLattice& L);

// Boundary sub-path from `from` to `to` (inclusive) following the stored
// cyclic orientation. Throws NotOnBoundary.
std::vector<int> boundary_arcs(const QuadLattice& L, int from, int to);

// JSON round trip; see lattice_io.cpp for the format.
std::string lattice_to_json(const QuadLattice& L);
QuadLattice lattice_from_json(const std::string& text);
void save_lattice(const QuadLattice& L, const std::string& path);
QuadLattice load_lattice(const std::string& path);

// Four-face star lattice around the origin together with the complex vertex
// function f = u + iv that is discrete analytic on it while the interior
// maximum of u exceeds its boundary maximum by the factor M (M > 1). The
// canonical example showing the maximum principle can fail on lattices with
// non-orthogonal diagonals.
struct StarExample {
    QuadLattice lattice;
    std::vector<double> u, v; // f = u + iv, discrete analytic
    double M = 0.0;
};

StarExample make_star_example(double M);

} // namespace dca
