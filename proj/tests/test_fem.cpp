#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <map>

#include "dca/errors.hpp"
#include "dca/fem.hpp"
#include "dca/lattice.hpp"
#include "dca/operators.hpp"

using namespace dca;

namespace {

Triangulation two_equilateral() {
    double h = std::sqrt(3.0) / 2.0;
    Triangulation T;
    T.points = {{0, 0}, {1, 0}, {0.5, h}, {0.5, -h}};
    T.triangles = {{0, 1, 2}, {0, 3, 1}};
    T.boundary = {0, 3, 1, 2};
    return T;
}

Triangulation hexagon_fan() {
    Triangulation T;
    T.points.push_back({0, 0});
    for (int k = 0; k < 6; ++k)
        T.points.push_back({std::cos(kPi * k / 3), std::sin(kPi * k / 3)});
    for (int k = 0; k < 6; ++k) T.triangles.push_back({0, 1 + k, 1 + (k + 1) % 6});
    T.boundary = {1, 2, 3, 4, 5, 6};
    return T;
}

Triangulation folded_pair() {
    // Two skinny triangles over a shared long edge: opposite angles sum
    // beyond pi, so the shared edge violates the Delaunay condition.
    Triangulation T;
    T.points = {{-1, 0}, {0, -0.2}, {1, 0}, {0, 0.2}};
    T.triangles = {{0, 1, 2}, {0, 2, 3}};
    T.boundary = {0, 1, 2, 3};
    return T;
}

double polygon_area(const Triangulation& T) {
    std::vector<Vec2> cycle;
    for (int v : T.boundary) cycle.push_back(T.points[v]);
    return polygon_signed_area(cycle);
}

} // namespace

TEST_CASE("cotangent weights at the reference angles") {
    CHECK(cot_weight(kPi / 3, kPi / 3) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
    CHECK(cot_weight(kPi / 2, kPi / 2) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(cot_weight(kPi / 4, kPi / 4) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("delaunay report on the equilateral pair") {
    DelaunayReport rep = delaunay_report(two_equilateral());
    CHECK(rep.is_delaunay);
    CHECK(rep.min_slack == doctest::Approx(kPi / 3).epsilon(1e-12));
    CHECK(rep.condition_d_slack == rep.min_slack);
    CHECK_FALSE(rep.regular_boundary); // both triangles touch the boundary twice
}

TEST_CASE("delaunay report flags a flipped pair") {
    DelaunayReport rep = delaunay_report(folded_pair());
    CHECK_FALSE(rep.is_delaunay);
    CHECK(rep.min_slack < 0.0);
}

TEST_CASE("a single triangle is vacuously delaunay") {
    Triangulation T;
    T.points = {{0, 0}, {1, 0}, {0, 1}};
    T.triangles = {{0, 1, 2}};
    T.boundary = {0, 1, 2};
    DelaunayReport rep = delaunay_report(T);
    CHECK(rep.is_delaunay);
    CHECK(rep.min_slack == doctest::Approx(kPi));
    CHECK_FALSE(rep.regular_boundary);
}

TEST_CASE("degenerate triangles are rejected") {
    Triangulation T;
    T.points = {{0, 0}, {1, 0}, {2, 0}};
    T.triangles = {{0, 1, 2}};
    T.boundary = {0, 1, 2};
    CHECK_THROWS_AS(delaunay_report(T), DegenerateTriangle);
    CHECK_THROWS_AS(circumcenter({0, 0}, {1, 0}, {2, 0}), DegenerateCircumcenter);
}

TEST_CASE("circumcenter closed forms") {
    Vec2 c = circumcenter({0, 0}, {1, 0}, {0, 1});
    CHECK(c.x == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(c.y == doctest::Approx(0.5).epsilon(1e-15));
    c = circumcenter({0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2});
    CHECK(c.x == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(c.y == doctest::Approx(0.5 / std::sqrt(3.0)).epsilon(1e-13));
}

TEST_CASE("kite transform enforces its preconditions") {
    CHECK_THROWS_AS(build_kite_lattice(two_equilateral()), IrregularBoundary);
    CHECK_THROWS_AS(build_kite_lattice(folded_pair()), NotDelaunay);

    // square split along a diagonal: opposite right angles, slack exactly 0
    Triangulation square;
    square.points = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    square.triangles = {{0, 1, 2}, {0, 2, 3}};
    square.boundary = {0, 1, 2, 3};
    CHECK_THROWS_AS(build_kite_lattice(square), NotDelaunay);
}

TEST_CASE("hexagon fan transforms into six orthogonal kites") {
    Triangulation T = hexagon_fan();
    DelaunayReport rep = delaunay_report(T);
    CHECK(rep.is_delaunay);
    CHECK(rep.regular_boundary);
    QuadLattice L = build_kite_lattice(T);
    CHECK(L.kind == LatticeKind::orthogonal);
    CHECK(L.face_count() == 6);
    CHECK(L.vertex_count() == 13); // 7 mesh vertices + 6 circumcenters
    CHECK(validate(L).ok());
    for (int f = 0; f < L.face_count(); ++f) {
        Complex c = conductance(L, f);
        CHECK(c.imag() == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(c.real() == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
    }
}

TEST_CASE("kite conductances are the cotangent weights on seeded meshes") {
    Triangulation T = make_disk_triangulation(5, 42);
    DelaunayReport rep = delaunay_report(T);
    REQUIRE(rep.is_delaunay);
    REQUIRE(rep.min_slack > 0.0);
    REQUIRE(rep.regular_boundary);

    QuadLattice L = build_kite_lattice(T);
    CHECK(L.kind == LatticeKind::orthogonal);

    // Recover each face's cotangent weight from the two triangle angles
    // opposite the B diagonal (an interior mesh edge).
    std::map<std::pair<int, int>, std::vector<int>> edge_tris;
    for (int t = 0; t < T.triangle_count(); ++t)
        for (int k = 0; k < 3; ++k) {
            int a = T.triangles[t][k], b = T.triangles[t][(k + 1) % 3];
            edge_tris[{std::min(a, b), std::max(a, b)}].push_back(t);
        }
    auto angle_at = [&](int t, int a, int b) {
        int c = -1;
        for (int v : T.triangles[t])
            if (v != a && v != b) c = v;
        Vec2 u = T.points[a] - T.points[c], w = T.points[b] - T.points[c];
        return std::acos(dot(u, w) / (norm(u) * norm(w)));
    };
    for (int f = 0; f < L.face_count(); ++f) {
        int a = L.faces[f].v[0], b = L.faces[f].v[2]; // B diagonal = mesh edge
        const auto& tris = edge_tris.at({std::min(a, b), std::max(a, b)});
        REQUIRE(tris.size() == 2);
        double w = cot_weight(angle_at(tris[0], a, b), angle_at(tris[1], a, b));
        Complex c = conductance(L, f);
        CHECK(std::abs(c.imag()) <= 1e-12);
        CHECK(c.real() == doctest::Approx(w).epsilon(1e-12));
    }
}

TEST_CASE("kite faces tile the polygon together with the boundary slivers") {
    Triangulation T = make_disk_triangulation(4, 7);
    QuadLattice L = build_kite_lattice(T);
    double covered = 0.0;
    for (const Face& f : L.faces) covered += f.area;
    // boundary edges contribute the triangle (endpoint, circumcenter, endpoint)
    std::map<std::pair<int, int>, int> edge_count, edge_tri;
    for (int t = 0; t < T.triangle_count(); ++t)
        for (int k = 0; k < 3; ++k) {
            int a = T.triangles[t][k], b = T.triangles[t][(k + 1) % 3];
            auto key = std::make_pair(std::min(a, b), std::max(a, b));
            edge_count[key]++;
            edge_tri[key] = t;
        }
    for (const auto& [key, cnt] : edge_count)
        if (cnt == 1) {
            const auto& tri = T.triangles[edge_tri[key]];
            Vec2 cc = circumcenter(T.points[tri[0]], T.points[tri[1]], T.points[tri[2]]);
            covered += std::abs(
                cross(T.points[key.second] - T.points[key.first], cc - T.points[key.first])) / 2;
        }
    CHECK(covered == doctest::Approx(polygon_area(T)).epsilon(1e-10));
}

TEST_CASE("fem reproduces linear and constant data") {
    Triangulation T = make_disk_triangulation(4, 1);
    std::map<int, double> g;
    for (int v : T.boundary) g[v] = T.points[v].x;
    VertexFunction u = solve_fem(T, g);
    for (int v = 0; v < T.vertex_count(); ++v)
        CHECK(u[v] == doctest::Approx(T.points[v].x).epsilon(1e-11));

    for (auto& [v, val] : g) val = 2.0;
    u = solve_fem(T, g);
    for (int v = 0; v < T.vertex_count(); ++v) CHECK(u[v] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("hexagon fem solve has the closed-form center value") {
    Triangulation T = hexagon_fan();
    std::map<int, double> g;
    for (int v : T.boundary) {
        Vec2 p = T.points[v];
        g[v] = p.x * p.x - p.y * p.y; // Re z^2 on the ring
    }
    VertexFunction u = solve_fem(T, g);
    // single interior unknown with equal weights: the mean of the ring values,
    // which vanishes for Re z^2 over the six sixth roots of unity
    CHECK(u[0] == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("fem equals the kite-lattice dirichlet solve") {
    for (std::uint64_t seed : {2ULL, 3ULL}) {
        Triangulation T = make_disk_triangulation(5, seed);
        double gap = kite_equivalence(T, [](Vec2 p) { return p.x * p.x - p.y * p.y; });
        CHECK(gap <= 1e-9);
    }
    CHECK_THROWS_AS(kite_equivalence(folded_pair(), [](Vec2 p) { return p.x; }), NotDelaunay);
}

TEST_CASE("seeded disk meshes are delaunay across seeds and sizes") {
    for (int rings : {3, 6, 9}) {
        for (std::uint64_t seed : {0ULL, 5ULL, 11ULL}) {
            Triangulation T = make_disk_triangulation(rings, seed);
            CHECK(T.vertex_count() == 1 + 4 * rings * (rings + 1));
            DelaunayReport rep = delaunay_report(T);
            CHECK(rep.is_delaunay);
            CHECK(rep.min_slack > 0.0);
            CHECK(rep.regular_boundary);
        }
    }
}

TEST_CASE("triangulation files round trip") {
    Triangulation T = make_disk_triangulation(3, 9);
    std::string path = "fem_test_mesh.json";
    save_triangulation(T, path);
    Triangulation R = load_triangulation(path);
    REQUIRE(R.vertex_count() == T.vertex_count());
    REQUIRE(R.triangle_count() == T.triangle_count());
    for (int v = 0; v < T.vertex_count(); ++v) {
        CHECK(R.points[v].x == T.points[v].x);
        CHECK(R.points[v].y == T.points[v].y);
    }
    CHECK(R.triangles == T.triangles);
    CHECK(R.boundary == T.boundary);
    std::remove(path.c_str());
}
