#include "dca/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <stdexcept>
#include <thread>

#include "dca/errors.hpp"
#include "dca/quadrature.hpp"
#include "dca/solver.hpp"

namespace dca {

namespace {

void check_size(const QuadLattice& L, size_t n, const char* what) {
    if (n != L.points.size())
        throw std::invalid_argument(std::string(what) + ": expected one value per vertex");
}

int thread_cap() {
    if (const char* env = std::getenv("DCA_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 2;
}

// Runs job(level) for every level on a small worker pool; the first exception
// (by level order) is rethrown once all workers have stopped.
void parallel_levels(int count, const std::function<void(int)>& job) {
    int workers = std::min(count, thread_cap());
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> failure(count);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                try {
                    job(i);
                } catch (...) {
                    failure[i] = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    for (int i = 0; i < count; ++i)
        if (failure[i]) std::rethrow_exception(failure[i]);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

MaxPrincipleReport max_principle_report(const QuadLattice& L, const VertexFunction& u) {
    check_size(L, u.size(), "max_principle_report");
    auto on_boundary = L.boundary_mask();
    MaxPrincipleReport rep;
    rep.max_interior = -std::numeric_limits<double>::infinity();
    rep.max_boundary = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < L.vertex_count(); ++i) {
        double& slot = on_boundary[i] ? rep.max_boundary : rep.max_interior;
        slot = std::max(slot, u[i]);
    }
    double overall = std::max(rep.max_interior, rep.max_boundary);
    rep.ratio = overall == rep.max_boundary ? 1.0 : overall / rep.max_boundary;
    return rep;
}

double green_residual(const QuadLattice& L, const VertexFunction& u, const VertexFunction& v) {
    if (L.kind == LatticeKind::general)
        throw NotOrthogonal("the two-function Green identity needs an orthogonal lattice");
    check_size(L, u.size(), "green_residual");
    check_size(L, v.size(), "green_residual");
    StiffnessSystem S = assemble(L);
    VertexFunction lu = laplacian(S, u), lv = laplacian(S, v);
    double sum = 0.0;
    for (int i = 0; i < L.vertex_count(); ++i)
        if (L.color[i] == Color::B) sum += u[i] * lv[i] - v[i] * lu[i];
    return std::abs(sum);
}

double energy_conservation_residual(const QuadLattice& L, const ComplexVertexFunction& f) {
    check_size(L, f.size(), "energy_conservation_residual");
    double scale = 0.0;
    for (const Complex& w : f) scale = std::max(scale, std::abs(w));
    if (analytic_residual(L, f) > 1e-8 * std::max(scale, 1e-300))
        throw NotAnalytic("energy conservation needs a discrete analytic function");

    VertexFunction u(f.size());
    for (size_t i = 0; i < f.size(); ++i) u[i] = f[i].real();
    double lhs = energy(L, u);

    Complex boundary_sum = 0.0;
    int n = static_cast<int>(L.boundary.size());
    for (int k = 0; k < n; ++k) {
        int b = L.boundary[k];
        if (L.color[b] != Color::B) continue;
        int prev = L.boundary[(k + n - 1) % n];
        int next = L.boundary[(k + 1) % n];
        boundary_sum += f[b] * (std::conj(f[prev]) - std::conj(f[next])) * 0.5;
    }
    return std::abs(lhs - boundary_sum.imag());
}

double laplacian_box_residual(const QuadLattice& L, const SmoothField& g, const AxisSquare& box) {
    if (!(box.side > L.h))
        throw std::invalid_argument("laplacian_box_residual: box side must exceed h");
    const double x0 = box.center.x - 0.5 * box.side, x1 = box.center.x + 0.5 * box.side;
    const double y0 = box.center.y - 0.5 * box.side, y1 = box.center.y + 0.5 * box.side;

    std::vector<Vec2> poly(L.boundary.size());
    for (size_t i = 0; i < L.boundary.size(); ++i) poly[i] = L.points[L.boundary[i]];
    for (Vec2 corner : {Vec2{x0, y0}, Vec2{x1, y0}, Vec2{x1, y1}, Vec2{x0, y1}})
        if (!point_in_polygon(corner, poly) || polygon_boundary_distance(corner, poly) == 0.0)
            throw BoxOutsideLattice("probe box leaves the lattice boundary polygon");

    VertexFunction sampled(L.points.size());
    for (size_t i = 0; i < L.points.size(); ++i) sampled[i] = g.value(L.points[i]);
    VertexFunction lap = laplacian(L, sampled);

    double discrete = 0.0;
    for (int i = 0; i < L.vertex_count(); ++i) {
        Vec2 p = L.points[i];
        if (L.color[i] == Color::B && p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1)
            discrete += lap[i];
    }
    double integral = integrate_rect(g.laplacian, x0, y0, x1, y1, 1e-12);
    return std::abs(discrete - integral);
}

std::vector<StudyRecord> dirichlet_convergence_study(const Domain& domain, const SmoothField& g,
                                                     const std::vector<QuadLattice>& lattices,
                                                     const std::function<double(Vec2)>& exact_u) {
    std::vector<StudyRecord> records(lattices.size());
    parallel_levels(static_cast<int>(lattices.size()), [&](int level) {
        const QuadLattice& L = lattices[level];
        StudyRecord rec;
        rec.h = L.h;
        rec.eccentricity = eccentricity(L).e;
        auto t0 = std::chrono::steady_clock::now();
        std::map<int, double> data;
        for (int v : L.boundary) data[v] = g.value(L.points[v]);
        SolveReport solved = solve_dirichlet(L, data);
        rec.solve_seconds = seconds_since(t0);
        rec.energy = solved.energy;
        for (int i = 0; i < L.vertex_count(); ++i)
            if (domain.contains(L.points[i]))
                rec.max_error =
                    std::max(rec.max_error, std::abs(solved.solution[i] - exact_u(L.points[i])));
        records[level] = rec;
    });
    return records;
}

std::vector<StudyRecord> energy_convergence_study(const Domain& domain, const SmoothField& g,
                                                  const std::vector<QuadLattice>& lattices) {
    const double limit = integrate_domain(
        domain, [&](Vec2 p) { return norm2(g.grad(p)); }, 1e-12);
    std::vector<StudyRecord> records(lattices.size());
    parallel_levels(static_cast<int>(lattices.size()), [&](int level) {
        const QuadLattice& L = lattices[level];
        StudyRecord rec;
        rec.h = L.h;
        rec.eccentricity = eccentricity(L).e;
        auto t0 = std::chrono::steady_clock::now();
        VertexFunction sampled(L.points.size());
        for (size_t i = 0; i < L.points.size(); ++i) sampled[i] = g.value(L.points[i]);
        rec.energy = energy(L, sampled);
        rec.solve_seconds = seconds_since(t0);
        rec.max_error = std::abs(rec.energy - limit);
        records[level] = rec;
    });
    return records;
}

double friedrichs_ratio(const QuadLattice& L, const Domain& domain, double margin,
                        const VertexFunction& u) {
    check_size(L, u.size(), "friedrichs_ratio");
    if (!(margin > L.h))
        throw MarginTooSmall("margin must exceed the lattice mesh size h");
    for (int v : L.boundary)
        if (domain.boundary_distance(L.points[v]) >= margin)
            throw MarginTooSmall("margin must cover every lattice boundary vertex");

    double strip = 0.0;
    for (int i = 0; i < L.vertex_count(); ++i)
        if (domain.boundary_distance(L.points[i]) < margin) strip += u[i] * u[i];
    double boundary = 0.0;
    for (int v : L.boundary) boundary += u[v] * u[v];

    const double h = L.h;
    double numerator = h * h * strip;
    double denominator = h * margin * boundary + margin * margin * energy(L, u);
    if (denominator == 0.0) return 0.0;
    return numerator / denominator;
}

std::vector<std::pair<double, double>> continuity_modulus(
    const QuadLattice& L, const VertexFunction& u,
    const std::vector<std::pair<int, int>>& pairs) {
    check_size(L, u.size(), "continuity_modulus");
    std::vector<std::pair<double, double>> out;
    out.reserve(pairs.size());
    for (auto [a, b] : pairs) {
        if (a < 0 || b < 0 || a >= L.vertex_count() || b >= L.vertex_count())
            throw std::invalid_argument("continuity_modulus: vertex index out of range");
        out.emplace_back(norm(L.points[a] - L.points[b]), std::abs(u[a] - u[b]));
    }
    return out;
}

std::string study_csv(const std::vector<StudyRecord>& records) {
    std::string out = "level,h,eccentricity,max_error,energy,solve_seconds\n";
    char line[256];
    for (size_t i = 0; i < records.size(); ++i) {
        const StudyRecord& r = records[i];
        std::snprintf(line, sizeof line, "%zu,%.12g,%.12g,%.12g,%.12g,%.6g\n", i, r.h,
                      r.eccentricity, r.max_error, r.energy, r.solve_seconds);
        out += line;
    }
    return out;
}

} // namespace dca
