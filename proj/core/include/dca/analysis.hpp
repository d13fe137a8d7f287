#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "dca/lattice.hpp"
#include "dca/operators.hpp"

namespace dca {

// Smooth scalar field with the derivative data the approximation diagnostics
// need. Only the evaluators a given operation uses have to be set.
struct SmoothField {
    std::function<double(Vec2)> value;
    std::function<Vec2(Vec2)> grad;
    std::function<double(Vec2)> laplacian;
};

struct MaxPrincipleReport {
    double max_interior = 0.0; // max of u over interior vertices (-inf if none)
    double max_boundary = 0.0; // max of u over the boundary cycle
    double ratio = 1.0;        // max over all vertices / max_boundary; exactly
                               // 1 whenever the overall max sits on the boundary
};

// The two maxima and their ratio. For discrete harmonic u on an orthogonal
// lattice the overall maximum is attained on the boundary, so ratio == 1.
MaxPrincipleReport max_principle_report(const QuadLattice& L, const VertexFunction& u);

// |sum over B vertices of (u laplacian(v) - v laplacian(u))|. Zero in exact
// arithmetic for any u, v on an orthogonal lattice: the stiffness matrix
// decouples into symmetric B and W blocks there. Throws NotOrthogonal.
double green_residual(const QuadLattice& L, const VertexFunction& u, const VertexFunction& v);

// |E(Re f) - Im sum_b f(b) (conj f(prev) - conj f(next)) / 2| where b runs
// over the boundary B vertices and prev/next are the cyclic boundary
// neighbors in ccw order. Throws NotAnalytic when f fails the residual check.
double energy_conservation_residual(const QuadLattice& L, const ComplexVertexFunction& f);

// Axis-aligned square probe region for the Laplacian approximation check.
struct AxisSquare {
    Vec2 center;
    double side = 0.0;
};

// |sum of laplacian(g sampled) over B vertices inside the box - integral of
// the continuous Laplacian of g over the box|. The integral is evaluated by
// adaptive quadrature to 1e-12. Throws BoxOutsideLattice when a box corner
// leaves the boundary polygon; the box side must exceed L.h.
double laplacian_box_residual(const QuadLattice& L, const SmoothField& g, const AxisSquare& box);

// One refinement level of a convergence study.
struct StudyRecord {
    double h = 0.0;
    double eccentricity = 0.0;
    double max_error = 0.0;
    double energy = 0.0;
    double solve_seconds = 0.0;
};

// Solves the Dirichlet problem with boundary data g.value on every lattice
// and reports max |u - exact_u| over the vertices inside the domain closure.
// Levels run in parallel (capped by the DCA_THREADS environment variable);
// records are indexed by level.
std::vector<StudyRecord> dirichlet_convergence_study(const Domain& domain, const SmoothField& g,
                                                     const std::vector<QuadLattice>& lattices,
                                                     const std::function<double(Vec2)>& exact_u);

// Compares the lattice energy of the sampled field with the continuous
// Dirichlet energy integral of |g.grad|^2 over the domain; max_error is the
// gap to that limit.
std::vector<StudyRecord> energy_convergence_study(const Domain& domain, const SmoothField& g,
                                                  const std::vector<QuadLattice>& lattices);

// h^2 L2(strip)(u) / (h r L2(boundary)(u) + r^2 E(u)) with the strip taken as
// the vertices closer than `margin` to the domain boundary; a bounded-ratio
// diagnostic. Throws MarginTooSmall unless margin > h and the strip covers
// every lattice boundary vertex.
double friedrichs_ratio(const QuadLattice& L, const Domain& domain, double margin,
                        const VertexFunction& u);

// Raw equicontinuity data: (|z - w|, |u(z) - u(w)|) for the requested vertex
// pairs.
std::vector<std::pair<double, double>> continuity_modulus(
    const QuadLattice& L, const VertexFunction& u,
    const std::vector<std::pair<int, int>>& pairs);

// CSV with header line "level,h,eccentricity,max_error,energy,solve_seconds".
std::string study_csv(const std::vector<StudyRecord>& records);

} // namespace dca
