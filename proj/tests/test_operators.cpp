#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "dca/errors.hpp"
#include "dca/lattice.hpp"
#include "dca/operators.hpp"
#include "dca/rng.hpp"
#include "dca/solver.hpp"

using namespace dca;

namespace {

QuadLattice unit_square() {
    return make_lattice({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 2, 3}});
}

VertexFunction sample(const QuadLattice& L, double (*g)(Vec2)) {
    VertexFunction u(L.points.size());
    for (size_t i = 0; i < u.size(); ++i) u[i] = g(L.points[i]);
    return u;
}

double re_z(Vec2 p) { return p.x; }
double re_z2(Vec2 p) { return p.x * p.x - p.y * p.y; }
double im_z2(Vec2 p) { return 2 * p.x * p.y; }

VertexFunction random_function(const QuadLattice& L, std::uint64_t seed) {
    SplitMix64 rng(seed);
    VertexFunction u(L.points.size());
    for (double& x : u) x = rng.uniform() * 2 - 1;
    return u;
}

} // namespace

TEST_CASE("face gradient solves the two diagonal equations") {
    std::array<Vec2, 4> sq = {{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};

    Vec2 g = face_gradient(sq, {0, 1, 1, 0}); // u = Re z at the corners
    CHECK(g.x == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(g.y == doctest::Approx(0.0).epsilon(1e-15));

    g = face_gradient(sq, {0, 0, 1, 0});
    CHECK(g.x == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(g.y == doctest::Approx(0.5).epsilon(1e-15));

    g = face_gradient(sq, {7, 7, 7, 7});
    CHECK(g.x == 0.0);
    CHECK(g.y == 0.0);

    // degenerate: both diagonals along the same line
    std::array<Vec2, 4> flat = {{{0, 0}, {1, 0}, {2, 0}, {3, 0}}};
    CHECK_THROWS_AS(face_gradient(flat, {0, 1, 2, 3}), SingularFace);
}

TEST_CASE("energy of linear data counts unit cells") {
    QuadLattice L = build_square_lattice(Domain::rect(0, 0, 2, 1), 1.0);
    CHECK(energy(L, sample(L, re_z)) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(energy(L, VertexFunction(L.points.size(), 3.5)) == 0.0);

    QuadLattice S = unit_square();
    CHECK(energy(S, {0, 0, 1, 0}) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("conductance closed forms") {
    // unit square: i (z2 - z4) / (z3 - z1) = i (1 - i) / (1 + i) = 1
    Complex c = conductance({0, 0}, {1, 0}, {1, 1}, {0, 1});
    CHECK(c.real() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(c.imag() == doctest::Approx(0.0).epsilon(1e-15));

    // orthogonal rhombus with diagonal ratio 2: c is the ratio (or reciprocal)
    Complex long_first = conductance({-1, 0}, {0, -0.5}, {1, 0}, {0, 0.5});
    CHECK(long_first.real() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(long_first.imag() == doctest::Approx(0.0).epsilon(1e-15));
    Complex short_first = conductance({0, -0.5}, {1, 0}, {0, 0.5}, {-1, 0});
    CHECK(short_first.real() == doctest::Approx(2.0).epsilon(1e-14));

    // kite of two unit equilateral triangles: c = 1/sqrt(3) = (cot60 + cot60)/2
    double yc = 1.0 / (2.0 * std::sqrt(3.0));
    Complex kite = conductance({0, 0}, {0.5, -yc}, {1, 0}, {0.5, yc});
    CHECK(kite.real() == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
    CHECK(kite.imag() == doctest::Approx(0.0).epsilon(1e-15));

    CHECK_THROWS_AS(conductance({0, 0}, {1, 0}, {0, 0}, {0, 1}), DegenerateDiagonal);
}

TEST_CASE("assembled form reproduces the energy") {
    QuadLattice S = unit_square();
    StiffnessSystem sys = assemble(S);
    for (VertexFunction u : {VertexFunction{0, 1, 1, 0}, VertexFunction{0, 0, 1, 0},
                             VertexFunction{1, 1, 1, 1}, VertexFunction{0.3, -2, 0.7, 5}}) {
        CHECK(0.5 * sys.matrix.quadratic_form(u) == doctest::Approx(energy(S, u)).epsilon(1e-12));
    }
}

TEST_CASE("stiffness rows sum to zero") {
    QuadLattice L = build_square_lattice(Domain::disk(0, 0, 1.3), 0.25);
    StiffnessSystem sys = assemble(L);
    for (int i = 0; i < sys.matrix.n; ++i) {
        double row = 0.0;
        for (int k = sys.matrix.rowptr[i]; k < sys.matrix.rowptr[i + 1]; ++k)
            row += sys.matrix.val[k];
        CHECK(std::abs(row) <= 1e-12);
    }
}

TEST_CASE("B and W blocks decouple on orthogonal lattices") {
    QuadLattice L = build_square_lattice(Domain::disk(0, 0, 1.3), 0.25);
    StiffnessSystem sys = assemble(L);
    for (int i = 0; i < sys.matrix.n; ++i)
        for (int k = sys.matrix.rowptr[i]; k < sys.matrix.rowptr[i + 1]; ++k)
            if (L.color[i] != L.color[sys.matrix.col[k]]) CHECK(sys.matrix.val[k] == 0.0);
}

TEST_CASE("interior block is positive definite") {
    QuadLattice L = build_square_lattice(Domain::rect(0, 0, 2, 2), 0.5);
    StiffnessSystem sys = assemble(L);
    SparseSym A = sys.matrix.submatrix(sys.interior);
    SplitMix64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> x(sys.interior.size());
        double mag = 0.0;
        for (double& v : x) {
            v = rng.uniform() * 2 - 1;
            mag = std::max(mag, std::abs(v));
        }
        if (mag == 0.0) continue;
        CHECK(A.quadratic_form(x) > 0.0);
    }
}

TEST_CASE("laplacian annihilates discretely harmonic samples") {
    QuadLattice L = build_square_lattice(Domain::rect(-1, -1, 1, 1), 0.25);
    auto interior_max = [&](const VertexFunction& lap) {
        auto on_boundary = L.boundary_mask();
        double m = 0.0;
        for (int v = 0; v < L.vertex_count(); ++v)
            if (!on_boundary[v]) m = std::max(m, std::abs(lap[v]));
        return m;
    };
    CHECK(interior_max(laplacian(L, sample(L, re_z))) <= 1e-13);
    CHECK(interior_max(laplacian(L, sample(L, re_z2))) <= 1e-12);
    CHECK(interior_max(laplacian(L, VertexFunction(L.points.size(), 4.0))) <= 1e-14);
}

TEST_CASE("the two laplacian formulas agree") {
    for (const QuadLattice& L :
         {build_square_lattice(Domain::disk(0, 0, 1.2), 0.2), make_star_example(2.0).lattice}) {
        VertexFunction u = random_function(L, 5);
        VertexFunction a = laplacian(L, u);
        VertexFunction b = laplacian_via_gradients(L, u);
        double scale = 1e-300;
        for (double x : a) scale = std::max(scale, std::abs(x));
        for (size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-12 * scale);
    }
}

TEST_CASE("energy equals the half quadratic form for random data") {
    QuadLattice L1 = build_square_lattice(Domain::disk(0, 0, 1.1), 0.25);
    QuadLattice L2 = make_star_example(4.0).lattice;
    for (const QuadLattice& L : {L1, L2}) {
        StiffnessSystem sys = assemble(L);
        for (int trial = 0; trial < 100; ++trial) {
            VertexFunction u = random_function(L, 100 + trial);
            double e = energy(L, u);
            CHECK(std::abs(e - 0.5 * sys.matrix.quadratic_form(u)) <= 1e-10 * std::max(e, 1e-300));
        }
    }
}

TEST_CASE("orthogonal energy matches the split conductance form") {
    QuadLattice L = build_square_lattice(Domain::disk(0.2, 0, 1.3), 0.3);
    VertexFunction u = random_function(L, 17);
    double split = 0.0;
    for (int f = 0; f < L.face_count(); ++f) {
        const auto& v = L.faces[f].v;
        double c = conductance(L, f).real();
        double du = u[v[2]] - u[v[0]];
        double dw = u[v[3]] - u[v[1]];
        split += 0.5 * (c * du * du + dw * dw / c);
    }
    double e = energy(L, u);
    CHECK(std::abs(e - split) <= 1e-12 * e);
}

TEST_CASE("analytic residual vanishes exactly where it should") {
    QuadLattice L = build_square_lattice(Domain::disk(0, 0, 1.2), 0.2);

    ComplexVertexFunction f(L.points.size());
    for (int v = 0; v < L.vertex_count(); ++v) f[v] = L.z(v);
    CHECK(analytic_residual(L, f) <= 1e-14);

    for (int v = 0; v < L.vertex_count(); ++v) f[v] = L.z(v) * L.z(v);
    CHECK(analytic_residual(L, f) <= 1e-13);

    f[7] += Complex{0.25, 0.0};
    CHECK(analytic_residual(L, f) > 1e-3);
}

TEST_CASE("the star example function is discrete analytic") {
    StarExample ex = make_star_example(2.0);
    ComplexVertexFunction f(ex.u.size());
    for (size_t i = 0; i < f.size(); ++i) f[i] = Complex{ex.u[i], ex.v[i]};
    double scale = 0.0;
    for (const Complex& w : f) scale = std::max(scale, std::abs(w));
    CHECK(analytic_residual(ex.lattice, f) <= 1e-12 * scale);
}

TEST_CASE("conjugate pairs are discrete analytic") {
    QuadLattice L = build_square_lattice(Domain::disk(0, 0, 1.0), 0.25);
    std::map<int, double> g;
    for (int v : L.boundary) g[v] = im_z2(L.points[v]);
    SolveReport rep = solve_dirichlet(L, g);
    ComplexVertexFunction f = analytic_completion(L, rep.solution, 0, 0.0);
    double scale = 0.0;
    for (const Complex& w : f) scale = std::max(scale, std::abs(w));
    CHECK(analytic_residual(L, f) <= 1e-10 * scale);
}
