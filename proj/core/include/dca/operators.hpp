#pragma once

#include <array>
#include <vector>

#include "dca/geometry.hpp"
#include "dca/lattice.hpp"
#include "dca/linalg.hpp"

namespace dca {

// Per-vertex scalar data, indexed like QuadLattice::points.
using VertexFunction = std::vector<double>;
using ComplexVertexFunction = std::vector<Complex>;

// Gradient of the values on one face: the unique vector g with
//   g . (z3 - z1) = u3 - u1   and   g . (z4 - z2) = u4 - u2.
// Throws SingularFace when the diagonals are parallel.
Vec2 face_gradient(const std::array<Vec2, 4>& z, const std::array<double, 4>& u);
Vec2 face_gradient(const QuadLattice& L, int face, const VertexFunction& u);

// Complex conductance of a face in stored (ccw, B-first) order:
//   c = i (z2 - z4) / (z3 - z1).
// Real and positive exactly when the diagonals are orthogonal; positive real
// part for every simple ccw face. Throws DegenerateDiagonal when z1 == z3.
Complex conductance(Complex z1, Complex z2, Complex z3, Complex z4);
Complex conductance(const QuadLattice& L, int face);

// Dirichlet energy  E(u) = sum over faces of |face_gradient|^2 * area.
double face_energy(const QuadLattice& L, int face, const VertexFunction& u);
double energy(const QuadLattice& L, const VertexFunction& u);

// The energy as a quadratic form: E(u) = (1/2) u^T M u over all vertices.
struct StiffnessSystem {
    SparseSym matrix;
    std::vector<int> interior; // ascending vertex ids not on the boundary
    std::vector<int> boundary; // ascending vertex ids on the boundary
};
StiffnessSystem assemble(const QuadLattice& L);

// Discrete Laplacian  (laplacian u)(z) = -dE/du(z) = -(M u)(z); computed two
// independent ways, the second from rotated face gradients dotted against the
// diagonals (used as a cross-check of the assembly).
VertexFunction laplacian(const QuadLattice& L, const VertexFunction& u);
VertexFunction laplacian(const StiffnessSystem& S, const VertexFunction& u);
VertexFunction laplacian_via_gradients(const QuadLattice& L, const VertexFunction& u);

// Max over faces of |(f1-f3)/(z1-z3) - (f2-f4)/(z2-z4)|; zero exactly for
// discrete analytic f. Throws DegenerateDiagonal on a zero-length diagonal.
double analytic_residual(const QuadLattice& L, const ComplexVertexFunction& f);

} // namespace dca
