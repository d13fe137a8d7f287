#pragma once

#include <map>
#include <utility>
#include <vector>

#include "dca/lattice.hpp"
#include "dca/operators.hpp"

namespace dca {

struct SolveReport {
    VertexFunction solution;
    double residual = 0.0; // max |laplacian| over interior vertices
    int iterations = 0;    // 0 for the direct path
    double energy = 0.0;
};

// Dirichlet problem: boundary_values must prescribe exactly the boundary
// vertices. Below kDenseSolveThreshold interior unknowns a Cholesky
// factorization is used; above it, Jacobi-preconditioned CG with relative
// tolerance `tol` and iteration cap 20n (SolverDiverged beyond that). An
// optional full-length initial guess seeds the iteration.
inline constexpr int kDenseSolveThreshold = 500;

SolveReport solve_dirichlet(const QuadLattice& L,
                            const std::map<int, double>& boundary_values,
                            double tol = 1e-12,
                            const VertexFunction* initial_guess = nullptr);

// Conjugate of a discrete harmonic u: the function v with grad v = rot90(grad u)
// on every face, built by path sums over the two diagonal graphs. The anchor
// pins v on the anchor's color class; the other class is pinned by matching
// the mixed increment v(z2) - v(z1) = rot90(grad u) . (z2 - z1) on the
// lexicographically first face. Throws NotHarmonic when some fundamental
// cycle sum exceeds 1e-8 * max|u|.
VertexFunction conjugate(const QuadLattice& L, const VertexFunction& u, int anchor,
                         double anchor_value);

// f = u + i * conjugate(u); discrete analytic when u is harmonic.
ComplexVertexFunction analytic_completion(const QuadLattice& L, const VertexFunction& u,
                                          int anchor, double anchor_value);

// Alternating-network state on an orthogonal lattice. Each face carries one
// B-diagonal edge with phasors  V = f(z1) - f(z3)  and  I = i (f(z4) - f(z2)),
// so that I = c V with c the face conductance.
struct NetworkState {
    ComplexVertexFunction f;
    std::vector<Complex> voltage; // per face
    std::vector<Complex> current; // per face
};

// Reconstruct the full network state from boundary data: b_increments[k] is
// u(b_{k+1}) - u(b_k) between consecutive boundary B vertices in cycle order
// (starting from the first B vertex on the stored boundary cycle, wrapping at
// the end), and likewise w_increments on the boundary W vertices. One anchor
// pins u on each color class.
NetworkState solve_network(const QuadLattice& L, const std::vector<double>& b_increments,
                           const std::vector<double>& w_increments,
                           std::pair<int, double> b_anchor, std::pair<int, double> w_anchor);

// Re sum over faces of V * conj(I) / 2; equals energy(L, Re f) for discrete
// analytic f. Throws NotAnalytic when the analytic residual exceeds
// 1e-8 * max|f|.
double network_energy(const QuadLattice& L, const ComplexVertexFunction& f);

} // namespace dca
