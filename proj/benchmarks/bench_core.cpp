#include <benchmark/benchmark.h>

#include <cmath>
#include <map>

#include "dca/fem.hpp"
#include "dca/lattice.hpp"
#include "dca/measure.hpp"
#include "dca/operators.hpp"
#include "dca/solver.hpp"

using namespace dca;

namespace {

// Unit-disk square lattice with roughly `faces` cells.
QuadLattice disk_lattice(long faces) {
    double step = std::sqrt(3.14159265358979323846 / static_cast<double>(faces));
    return build_square_lattice(Domain::disk(0.0, 0.0, 1.0), step);
}

void bm_assemble(benchmark::State& state) {
    QuadLattice L = disk_lattice(state.range(0));
    for (auto _ : state) {
        StiffnessSystem S = assemble(L);
        benchmark::DoNotOptimize(S.matrix.val.data());
    }
    state.SetItemsProcessed(state.iterations() * L.face_count());
    state.counters["faces"] = static_cast<double>(L.face_count());
}
BENCHMARK(bm_assemble)->Arg(1 << 12)->Arg(1 << 14)->Arg(1 << 16)->Arg(1 << 18);

void bm_solve_dirichlet(benchmark::State& state) {
    QuadLattice L = disk_lattice(state.range(0));
    std::map<int, double> g;
    for (int v : L.boundary) {
        Vec2 p = L.points[v];
        g[v] = std::exp(p.x) * std::cos(p.y);
    }
    for (auto _ : state) {
        SolveReport rep = solve_dirichlet(L, g);
        benchmark::DoNotOptimize(rep.solution.data());
    }
    state.counters["vertices"] = static_cast<double>(L.vertex_count());
}
BENCHMARK(bm_solve_dirichlet)->Arg(1 << 10)->Arg(1 << 13)->Arg(1 << 15)->Unit(benchmark::kMillisecond);

void bm_energy(benchmark::State& state) {
    QuadLattice L = disk_lattice(state.range(0));
    VertexFunction u(L.vertex_count());
    for (int i = 0; i < L.vertex_count(); ++i) u[i] = L.points[i].x * L.points[i].x;
    for (auto _ : state) benchmark::DoNotOptimize(energy(L, u));
    state.SetItemsProcessed(state.iterations() * L.face_count());
}
BENCHMARK(bm_energy)->Arg(1 << 14)->Arg(1 << 17);

void bm_kite_build(benchmark::State& state) {
    Triangulation T = make_disk_triangulation(static_cast<int>(state.range(0)), 11);
    for (auto _ : state) {
        QuadLattice K = build_kite_lattice(T);
        benchmark::DoNotOptimize(K.faces.data());
    }
    state.counters["triangles"] = static_cast<double>(T.triangles.size());
}
BENCHMARK(bm_kite_build)->Arg(8)->Arg(16)->Arg(32);

void bm_random_walks(benchmark::State& state) {
    QuadLattice L = build_square_lattice(Domain::rect(-1.0, -1.0, 1.0, 1.0), 0.125);
    std::vector<int> arc(L.boundary.begin(), L.boundary.begin() + L.boundary.size() / 4);
    int start = -1;
    auto mask = L.boundary_mask();
    for (int i = 0; i < L.vertex_count(); ++i)
        if (!mask[i] && L.color[i] == Color::B) { start = i; break; }
    WalkConfig cfg;
    cfg.n_walks = static_cast<int>(state.range(0));
    cfg.seed = 99;
    for (auto _ : state) {
        MeasureEstimate est = random_walk_measure(L, arc, start, cfg);
        benchmark::DoNotOptimize(est.p_hat);
    }
    state.SetItemsProcessed(state.iterations() * cfg.n_walks);
}
BENCHMARK(bm_random_walks)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
