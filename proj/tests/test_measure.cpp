#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "dca/errors.hpp"
#include "dca/lattice.hpp"
#include "dca/measure.hpp"

using namespace dca;

namespace {

int find_vertex(const QuadLattice& L, double x, double y) {
    for (int i = 0; i < L.vertex_count(); ++i)
        if (std::abs(L.points[i].x - x) < 1e-9 && std::abs(L.points[i].y - y) < 1e-9) return i;
    REQUIRE(false);
    return -1;
}

// 3x3 grid on [0,2]^2: one interior vertex at (1,1) whose B-diagonal
// neighbours are exactly the four corners, all with unit conductance.
QuadLattice grid3() { return build_square_lattice(Domain::rect(0.0, 0.0, 2.0, 2.0), 1.0); }

} // namespace

TEST_CASE("exact measure of the full boundary is identically one") {
    QuadLattice L = build_square_lattice(Domain::disk(0.0, 0.0, 1.0), 0.25);
    VertexFunction w = harmonic_measure_exact(L, L.boundary);
    for (int i = 0; i < L.vertex_count(); ++i) REQUIRE(w[i] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("exact measure of the empty arc is identically zero") {
    QuadLattice L = build_square_lattice(Domain::disk(0.0, 0.0, 1.0), 0.25);
    VertexFunction w = harmonic_measure_exact(L, {});
    for (int i = 0; i < L.vertex_count(); ++i) REQUIRE(w[i] == 0.0);
}

TEST_CASE("exact measure lies in [0,1] and sums to one over a boundary partition") {
    QuadLattice L = build_square_lattice(Domain::disk(0.0, 0.0, 1.0), 0.25);
    const size_t n = L.boundary.size();
    REQUIRE(n >= 6);
    // Split the cycle into three contiguous runs.
    size_t a = n / 3, b = 2 * n / 3;
    std::vector<int> arc1(L.boundary.begin(), L.boundary.begin() + a);
    std::vector<int> arc2(L.boundary.begin() + a, L.boundary.begin() + b);
    std::vector<int> arc3(L.boundary.begin() + b, L.boundary.end());
    VertexFunction w1 = harmonic_measure_exact(L, arc1);
    VertexFunction w2 = harmonic_measure_exact(L, arc2);
    VertexFunction w3 = harmonic_measure_exact(L, arc3);
    for (int i = 0; i < L.vertex_count(); ++i) {
        REQUIRE(w1[i] >= -1e-12);
        REQUIRE(w1[i] <= 1.0 + 1e-12);
        REQUIRE(w1[i] + w2[i] + w3[i] == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("arc order does not matter") {
    QuadLattice L = build_square_lattice(Domain::disk(0.0, 0.0, 1.0), 0.25);
    std::vector<int> arc(L.boundary.begin(), L.boundary.begin() + 5);
    std::vector<int> shuffled = {arc[3], arc[0], arc[4], arc[2], arc[1]};
    VertexFunction a = harmonic_measure_exact(L, arc);
    VertexFunction b = harmonic_measure_exact(L, shuffled);
    for (int i = 0; i < L.vertex_count(); ++i) REQUIRE(a[i] == b[i]);
}

TEST_CASE("3x3 grid: measure at the centre counts covered corners") {
    QuadLattice L = grid3();
    int centre = find_vertex(L, 1.0, 1.0);
    int c00 = find_vertex(L, 0.0, 0.0);
    int m10 = find_vertex(L, 1.0, 0.0);
    // Arc = bottom-left corner plus the bottom edge midpoint: exactly one of
    // the four corners, so the centre value is exactly 1/4 (its B-neighbours
    // are the corners, with equal weights).
    std::vector<int> arc = boundary_arcs(L, c00, m10);
    REQUIRE(arc.size() == 2);
    VertexFunction w = harmonic_measure_exact(L, arc);
    REQUIRE(w[centre] == doctest::Approx(0.25).epsilon(1e-13));

    // Three corners -> 3/4.
    int m01 = find_vertex(L, 0.0, 1.0);
    std::vector<int> big = boundary_arcs(L, m10, m01); // the long way round
    VertexFunction wb = harmonic_measure_exact(L, big);
    REQUIRE(wb[centre] == doctest::Approx(0.75).epsilon(1e-13));
}

TEST_CASE("walk agrees with the exact measure on the 3x3 grid") {
    QuadLattice L = grid3();
    int centre = find_vertex(L, 1.0, 1.0);
    std::vector<int> arc = boundary_arcs(L, find_vertex(L, 0.0, 0.0), find_vertex(L, 1.0, 0.0));
    WalkConfig cfg;
    cfg.n_walks = 20000;
    cfg.seed = 11;
    MeasureEstimate est = random_walk_measure(L, arc, centre, cfg);
    REQUIRE(est.n_capped == 0);
    REQUIRE(est.n_absorbed == cfg.n_walks);
    REQUIRE(std::abs(est.p_hat - 0.25) <= 4.0 * est.standard_error);
    REQUIRE(est.standard_error ==
            doctest::Approx(std::sqrt(est.p_hat * (1.0 - est.p_hat) / cfg.n_walks)).epsilon(1e-15));
}

TEST_CASE("walk on the full boundary is certain") {
    QuadLattice L = grid3();
    WalkConfig cfg;
    cfg.n_walks = 500;
    cfg.seed = 3;
    MeasureEstimate est = random_walk_measure(L, L.boundary, find_vertex(L, 1.0, 1.0), cfg);
    REQUIRE(est.p_hat == 1.0);
    REQUIRE(est.standard_error == 0.0);
    REQUIRE(est.n_absorbed == 500);
    REQUIRE(est.n_capped == 0);
}

TEST_CASE("walks split between an arc and its complement") {
    QuadLattice L = build_square_lattice(Domain::disk(0.0, 0.0, 1.0), 0.25);
    std::vector<int> arc(L.boundary.begin(), L.boundary.begin() + 7);
    std::vector<int> rest(L.boundary.begin() + 7, L.boundary.end());
    int start = -1;
    auto mask = L.boundary_mask();
    for (int i = 0; i < L.vertex_count(); ++i)
        if (!mask[i] && L.color[i] == Color::B) { start = i; break; }
    REQUIRE(start >= 0);
    WalkConfig cfg;
    cfg.n_walks = 4096; // power of two keeps the hit fractions exact
    cfg.seed = 99;
    MeasureEstimate a = random_walk_measure(L, arc, start, cfg);
    MeasureEstimate b = random_walk_measure(L, rest, start, cfg);
    // Identical walk streams, complementary absorption sets.
    REQUIRE(a.n_capped == 0);
    REQUIRE(a.p_hat + b.p_hat == 1.0);
}

TEST_CASE("walk is reproducible for a fixed seed") {
    QuadLattice L = build_square_lattice(Domain::disk(0.0, 0.0, 1.0), 0.25);
    std::vector<int> arc(L.boundary.begin(), L.boundary.begin() + 9);
    int start = -1;
    auto mask = L.boundary_mask();
    for (int i = 0; i < L.vertex_count(); ++i)
        if (!mask[i] && L.color[i] == Color::B) { start = i; break; }
    WalkConfig cfg;
    cfg.n_walks = 2500;
    cfg.seed = 4242;
    MeasureEstimate a = random_walk_measure(L, arc, start, cfg);
    MeasureEstimate b = random_walk_measure(L, arc, start, cfg);
    REQUIRE(a.p_hat == b.p_hat);
    REQUIRE(a.standard_error == b.standard_error);
    REQUIRE(a.n_absorbed == b.n_absorbed);
    REQUIRE(a.n_capped == b.n_capped);
}

TEST_CASE("walk on the W graph matches the exact measure") {
    QuadLattice L = build_square_lattice(Domain::disk(0.0, 0.0, 1.0), 0.2);
    std::vector<int> arc(L.boundary.begin(), L.boundary.begin() + 10);
    VertexFunction w = harmonic_measure_exact(L, arc);
    auto mask = L.boundary_mask();
    int start = -1;
    for (int i = 0; i < L.vertex_count(); ++i)
        if (!mask[i] && L.color[i] == Color::W) { start = i; break; }
    REQUIRE(start >= 0);
    WalkConfig cfg;
    cfg.n_walks = 20000;
    cfg.seed = 17;
    cfg.use_w_graph = true;
    MeasureEstimate est = random_walk_measure(L, arc, start, cfg);
    REQUIRE(est.n_capped == 0);
    REQUIRE(std::abs(est.p_hat - w[start]) <= 4.0 * est.standard_error + 1e-6);
}

TEST_CASE("a tight step cap drops walks but keeps the accounting") {
    QuadLattice L = build_square_lattice(Domain::disk(0.0, 0.0, 1.0), 0.1);
    std::vector<int> arc(L.boundary.begin(), L.boundary.begin() + 11);
    auto mask = L.boundary_mask();
    // The B vertex closest to the centre: the slowest walks start there, and
    // with the smallest legal cap only ~5e-5 of them run out of steps, so a
    // large walk count is needed to see any capped at all.
    int start = -1;
    double best = 1e30;
    for (int i = 0; i < L.vertex_count(); ++i)
        if (!mask[i] && L.color[i] == Color::B && norm(L.points[i]) < best) {
            best = norm(L.points[i]);
            start = i;
        }
    REQUIRE(start >= 0);
    WalkConfig cfg;
    cfg.n_walks = 100000;
    cfg.seed = 5;
    cfg.max_steps = L.vertex_count(); // smallest legal cap
    MeasureEstimate est = random_walk_measure(L, arc, start, cfg);
    REQUIRE(est.n_absorbed + est.n_capped == cfg.n_walks);
    REQUIRE(est.n_capped > 0);
    REQUIRE(est.p_hat <= static_cast<double>(est.n_absorbed) / cfg.n_walks);
}

TEST_CASE("measure requires an orthogonal lattice") {
    StarExample star = make_star_example(2.0);
    REQUIRE_THROWS_AS(harmonic_measure_exact(star.lattice, star.lattice.boundary), NotOrthogonal);
    WalkConfig cfg;
    REQUIRE_THROWS_AS(random_walk_measure(star.lattice, star.lattice.boundary, 0, cfg),
                      NotOrthogonal);
}

TEST_CASE("malformed arcs are rejected") {
    QuadLattice L = grid3();
    int centre = find_vertex(L, 1.0, 1.0);
    int c00 = find_vertex(L, 0.0, 0.0);
    int c20 = find_vertex(L, 2.0, 0.0);
    REQUIRE_THROWS_AS(harmonic_measure_exact(L, {centre}), NotAnArc);
    REQUIRE_THROWS_AS(harmonic_measure_exact(L, {c00, c00}), NotAnArc);
    // Two corners with the midpoint missing: two cyclic runs.
    REQUIRE_THROWS_AS(harmonic_measure_exact(L, {c00, c20}), NotAnArc);
    REQUIRE_THROWS_AS(harmonic_measure_exact(L, {-1}), NotAnArc);
}

TEST_CASE("invalid walk configurations are rejected") {
    QuadLattice L = grid3();
    int centre = find_vertex(L, 1.0, 1.0);
    std::vector<int> arc = {find_vertex(L, 0.0, 0.0)};
    WalkConfig cfg;
    cfg.n_walks = 0;
    REQUIRE_THROWS_AS(random_walk_measure(L, arc, centre, cfg), InvalidWalkConfig);
    cfg.n_walks = 10;
    cfg.max_steps = L.vertex_count() - 1;
    REQUIRE_THROWS_AS(random_walk_measure(L, arc, centre, cfg), InvalidWalkConfig);
    cfg.max_steps = 0;
    // Boundary start, wrong-colour start, out-of-range start.
    REQUIRE_THROWS_AS(random_walk_measure(L, arc, arc[0], cfg), InvalidWalkConfig);
    cfg.use_w_graph = true;
    REQUIRE_THROWS_AS(random_walk_measure(L, arc, centre, cfg), InvalidWalkConfig);
    cfg.use_w_graph = false;
    REQUIRE_THROWS_AS(random_walk_measure(L, arc, L.vertex_count(), cfg), InvalidWalkConfig);
}
