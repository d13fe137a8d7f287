#include "dca/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "dca/errors.hpp"
#include "dca/linalg.hpp"

namespace dca {

namespace {

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

} // namespace

SolveReport solve_dirichlet(const QuadLattice& L, const std::map<int, double>& boundary_values,
                            double tol, const VertexFunction* initial_guess) {
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    StiffnessSystem sys = assemble(L);
    if (boundary_values.size() != sys.boundary.size())
        throw InconsistentBoundaryData("expected one value per boundary vertex, got " +
                                       std::to_string(boundary_values.size()) + " for " +
                                       std::to_string(sys.boundary.size()));
    for (int v : sys.boundary)
        if (!boundary_values.count(v))
            throw InconsistentBoundaryData("no boundary value for vertex " + std::to_string(v));

    const int n = L.vertex_count();
    VertexFunction u(n, 0.0);
    for (const auto& [v, g] : boundary_values) u[v] = g;

    SolveReport rep;
    const auto& interior = sys.interior;
    if (!interior.empty()) {
        // Right-hand side: restricted rows of -M u0 with u0 = g on the
        // boundary and 0 inside.
        VertexFunction mu0 = sys.matrix.multiply(u);
        std::vector<double> b(interior.size());
        for (size_t i = 0; i < interior.size(); ++i) b[i] = -mu0[interior[i]];
        SparseSym A = sys.matrix.submatrix(interior);

        std::vector<double> x(interior.size(), 0.0);
        if (static_cast<int>(interior.size()) < kDenseSolveThreshold) {
            x = dense_spd_solve(A, b);
        } else {
            if (initial_guess) {
                if (initial_guess->size() != static_cast<size_t>(n))
                    throw std::invalid_argument("initial guess length does not match the lattice");
                for (size_t i = 0; i < interior.size(); ++i) x[i] = (*initial_guess)[interior[i]];
            }
            CgResult cg = pcg_jacobi(A, b, x, tol, 20 * static_cast<int>(interior.size()));
            rep.iterations = cg.iterations;
            if (!cg.converged)
                throw SolverDiverged("conjugate gradient hit the iteration cap at relative residual " +
                                     std::to_string(cg.residual));
        }
        for (size_t i = 0; i < interior.size(); ++i) u[interior[i]] = x[i];
    }

    VertexFunction mu = sys.matrix.multiply(u);
    double res = 0.0;
    for (int v : interior) res = std::max(res, std::abs(mu[v]));
    rep.residual = res;
    rep.energy = energy(L, u);
    rep.solution = std::move(u);
    return rep;
}

VertexFunction conjugate(const QuadLattice& L, const VertexFunction& u, int anchor,
                         double anchor_value) {
    if (u.size() != L.points.size())
        throw std::invalid_argument("vertex function length does not match the lattice");
    if (anchor < 0 || anchor >= L.vertex_count())
        throw std::invalid_argument("anchor vertex out of range");
    const double scale = max_abs(u);
    const double tol = 1e-8 * std::max(scale, 1e-300);

    // Each face contributes one B-diagonal increment and one W-diagonal
    // increment of v: dv = rot90(grad u) . diagonal.
    struct HalfEdge {
        int to;
        double inc;
    };
    std::vector<std::vector<HalfEdge>> adj(L.vertex_count());
    for (int f = 0; f < L.face_count(); ++f) {
        const auto& w = L.faces[f].v;
        Vec2 rg = rot90(face_gradient(L, f, u));
        Vec2 p = L.points[w[2]] - L.points[w[0]];
        Vec2 q = L.points[w[3]] - L.points[w[1]];
        double db = dot(rg, p), dw = dot(rg, q);
        adj[w[0]].push_back({w[2], db});
        adj[w[2]].push_back({w[0], -db});
        adj[w[1]].push_back({w[3], dw});
        adj[w[3]].push_back({w[1], -dw});
    }

    const double unset = std::numeric_limits<double>::quiet_NaN();
    VertexFunction v(L.points.size(), unset);
    auto spread = [&](int root) {
        std::queue<int> bfs;
        bfs.push(root);
        while (!bfs.empty()) {
            int a = bfs.front();
            bfs.pop();
            for (const HalfEdge& e : adj[a])
                if (std::isnan(v[e.to])) {
                    v[e.to] = v[a] + e.inc;
                    bfs.push(e.to);
                }
        }
    };
    v[anchor] = anchor_value;
    spread(anchor);

    // Tie the other color class through the lexicographically first face:
    // v(z2) := v(z1) + rot90(grad u) . (z2 - z1).
    int f0 = 0;
    for (int f = 1; f < L.face_count(); ++f)
        if (L.faces[f].v < L.faces[f0].v) f0 = f;
    {
        const auto& w = L.faces[f0].v;
        Vec2 rg = rot90(face_gradient(L, f0, u));
        double side = dot(rg, L.points[w[1]] - L.points[w[0]]);
        if (std::isnan(v[w[1]])) {
            if (std::isnan(v[w[0]]))
                throw NotHarmonic("anchor component does not reach the reference face");
            v[w[1]] = v[w[0]] + side;
            spread(w[1]);
        } else if (std::isnan(v[w[0]])) {
            v[w[0]] = v[w[1]] - side;
            spread(w[0]);
        }
    }
    for (int i = 0; i < L.vertex_count(); ++i)
        if (std::isnan(v[i]))
            throw ValidationError("diagonal graph is disconnected; conjugate undefined at vertex " +
                                  std::to_string(i));

    // Integrability: every fundamental cycle (non-tree edge) must close.
    for (int a = 0; a < L.vertex_count(); ++a)
        for (const HalfEdge& e : adj[a])
            if (std::abs(v[e.to] - v[a] - e.inc) > tol)
                throw NotHarmonic("conjugate increments do not close around a cycle (gap " +
                                  std::to_string(std::abs(v[e.to] - v[a] - e.inc)) + ")");
    return v;
}

ComplexVertexFunction analytic_completion(const QuadLattice& L, const VertexFunction& u,
                                          int anchor, double anchor_value) {
    VertexFunction v = conjugate(L, u, anchor, anchor_value);
    ComplexVertexFunction f(u.size());
    for (size_t i = 0; i < u.size(); ++i) f[i] = Complex{u[i], v[i]};
    return f;
}

NetworkState solve_network(const QuadLattice& L, const std::vector<double>& b_increments,
                           const std::vector<double>& w_increments,
                           std::pair<int, double> b_anchor, std::pair<int, double> w_anchor) {
    if (L.kind == LatticeKind::general)
        throw NotOrthogonal("network reconstruction requires an orthogonal lattice");

    // Split the boundary cycle by color; it alternates strictly.
    std::vector<int> bs, ws;
    for (size_t i = 0; i < L.boundary.size(); ++i) {
        int v = L.boundary[i];
        if (L.color[v] == L.color[L.boundary[(i + 1) % L.boundary.size()]])
            throw ValidationError("boundary cycle does not alternate colors");
        (L.color[v] == Color::B ? bs : ws).push_back(v);
    }
    if (b_increments.size() != bs.size() || w_increments.size() != ws.size())
        throw InconsistentBoundaryData(
            "need one increment per boundary vertex of each color (" + std::to_string(bs.size()) +
            " B, " + std::to_string(ws.size()) + " W)");

    double scale = std::max(std::abs(b_anchor.second), std::abs(w_anchor.second));
    for (double x : b_increments) scale = std::max(scale, std::abs(x));
    for (double x : w_increments) scale = std::max(scale, std::abs(x));
    double sb = 0.0, sw = 0.0;
    for (double x : b_increments) sb += x;
    for (double x : w_increments) sw += x;
    if (std::abs(sb) > 1e-10 * scale || std::abs(sw) > 1e-10 * scale)
        throw InconsistentBoundaryData("increments do not sum to zero around the boundary");

    auto integrate = [&](const std::vector<int>& cyc, const std::vector<double>& inc,
                         std::pair<int, double> anchor, std::map<int, double>& out) {
        auto it = std::find(cyc.begin(), cyc.end(), anchor.first);
        if (it == cyc.end())
            throw InconsistentBoundaryData("anchor vertex " + std::to_string(anchor.first) +
                                           " is not a boundary vertex of its color class");
        size_t k0 = static_cast<size_t>(it - cyc.begin());
        double val = anchor.second;
        out[cyc[k0]] = val;
        for (size_t s = 0; s + 1 < cyc.size(); ++s) {
            size_t k = (k0 + s) % cyc.size();
            val += inc[k];
            out[cyc[(k + 1) % cyc.size()]] = val;
        }
    };
    std::map<int, double> g;
    integrate(bs, b_increments, b_anchor, g);
    integrate(ws, w_increments, w_anchor, g);

    SolveReport rep = solve_dirichlet(L, g);
    NetworkState st;
    st.f = analytic_completion(L, rep.solution, b_anchor.first, 0.0);
    st.voltage.resize(L.face_count());
    st.current.resize(L.face_count());
    for (int f = 0; f < L.face_count(); ++f) {
        const auto& v = L.faces[f].v;
        st.voltage[f] = st.f[v[0]] - st.f[v[2]];
        st.current[f] = Complex{0.0, 1.0} * (st.f[v[3]] - st.f[v[1]]);
    }
    return st;
}

double network_energy(const QuadLattice& L, const ComplexVertexFunction& f) {
    double scale = 0.0;
    for (const Complex& z : f) scale = std::max(scale, std::abs(z));
    double res = analytic_residual(L, f);
    if (res > 1e-8 * std::max(scale, 1e-300))
        throw NotAnalytic("analytic residual " + std::to_string(res) +
                          " too large for a network interpretation");
    double e = 0.0;
    for (int k = 0; k < L.face_count(); ++k) {
        const auto& v = L.faces[k].v;
        Complex V = f[v[0]] - f[v[2]];
        Complex I = Complex{0.0, 1.0} * (f[v[3]] - f[v[1]]);
        e += 0.5 * (V * std::conj(I)).real();
    }
    return e;
}

} // namespace dca
