#include "dca/operators.hpp"

#include <cmath>
#include <stdexcept>

#include "dca/errors.hpp"

namespace dca {

namespace {

// Cross-term snap threshold: diagonals whose cosine is below this are treated
// as exactly orthogonal in the quadratic form, so B/W blocks decouple exactly
// on lattices that are orthogonal only up to rounding (kites in particular).
constexpr double kSnapCos = 1e-12;

void check_size(const QuadLattice& L, size_t n) {
    if (n != L.points.size())
        throw std::invalid_argument("vertex function length does not match the lattice");
}

} // namespace

Vec2 face_gradient(const std::array<Vec2, 4>& z, const std::array<double, 4>& u) {
    Vec2 p = z[2] - z[0];
    Vec2 q = z[3] - z[1];
    double det = cross(p, q); // twice the signed area
    if (det == 0.0) throw SingularFace("face diagonals are parallel");
    double db = u[2] - u[0];
    double dw = u[3] - u[1];
    return {(db * q.y - dw * p.y) / det, (-db * q.x + dw * p.x) / det};
}

Vec2 face_gradient(const QuadLattice& L, int face, const VertexFunction& u) {
    check_size(L, u.size());
    const auto& v = L.faces[face].v;
    return face_gradient(L.face_points(face), {u[v[0]], u[v[1]], u[v[2]], u[v[3]]});
}

Complex conductance(Complex z1, Complex z2, Complex z3, Complex z4) {
    Complex d = z3 - z1;
    if (d == Complex{0.0, 0.0}) throw DegenerateDiagonal("coincident diagonal endpoints");
    return Complex{0.0, 1.0} * (z2 - z4) / d;
}

Complex conductance(const QuadLattice& L, int face) {
    const auto& v = L.faces[face].v;
    return conductance(L.z(v[0]), L.z(v[1]), L.z(v[2]), L.z(v[3]));
}

double face_energy(const QuadLattice& L, int face, const VertexFunction& u) {
    Vec2 g = face_gradient(L, face, u);
    return norm2(g) * L.faces[face].area;
}

double energy(const QuadLattice& L, const VertexFunction& u) {
    check_size(L, u.size());
    double e = 0.0;
    for (int f = 0; f < L.face_count(); ++f) e += face_energy(L, f, u);
    return e;
}

StiffnessSystem assemble(const QuadLattice& L) {
    StiffnessSystem sys;
    TripletBuilder tb(L.vertex_count());
    tb.reserve(16 * static_cast<size_t>(L.face_count()));
    for (int f = 0; f < L.face_count(); ++f) {
        const auto& v = L.faces[f].v;
        Vec2 p = L.points[v[2]] - L.points[v[0]];
        Vec2 q = L.points[v[3]] - L.points[v[1]];
        double twoA = cross(p, q);
        if (twoA <= 0.0) throw SingularFace("face " + std::to_string(f) + " is degenerate");
        // E_face = (|q|^2 db^2 - 2 (p.q) db dw + |p|^2 dw^2) / (4A)
        // with db = u[v2]-u[v0], dw = u[v3]-u[v1]; scatter as a quadratic
        // form (1/2) u^T M u.
        double kbb = norm2(q) / twoA;
        double kww = norm2(p) / twoA;
        double kbw = -dot(p, q) / twoA;
        if (std::abs(dot(p, q)) <= kSnapCos * norm(p) * norm(q)) kbw = 0.0;
        int a = v[0], b = v[2], c = v[1], d = v[3];
        tb.add(a, a, kbb);
        tb.add(b, b, kbb);
        tb.add(a, b, -kbb);
        tb.add(b, a, -kbb);
        tb.add(c, c, kww);
        tb.add(d, d, kww);
        tb.add(c, d, -kww);
        tb.add(d, c, -kww);
        if (kbw != 0.0) {
            // cross term: kbw * db * dw = kbw (u_b - u_a)(u_d - u_c)
            tb.add(b, d, kbw);
            tb.add(d, b, kbw);
            tb.add(a, c, kbw);
            tb.add(c, a, kbw);
            tb.add(b, c, -kbw);
            tb.add(c, b, -kbw);
            tb.add(a, d, -kbw);
            tb.add(d, a, -kbw);
        }
    }
    sys.matrix = tb.compress();
    auto mask = L.boundary_mask();
    for (int v = 0; v < L.vertex_count(); ++v)
        (mask[v] ? sys.boundary : sys.interior).push_back(v);
    return sys;
}

VertexFunction laplacian(const StiffnessSystem& S, const VertexFunction& u) {
    VertexFunction out = S.matrix.multiply(u);
    for (double& x : out) x = -x;
    return out;
}

VertexFunction laplacian(const QuadLattice& L, const VertexFunction& u) {
    check_size(L, u.size());
    return laplacian(assemble(L), u);
}

VertexFunction laplacian_via_gradients(const QuadLattice& L, const VertexFunction& u) {
    check_size(L, u.size());
    VertexFunction out(L.points.size(), 0.0);
    for (int f = 0; f < L.face_count(); ++f) {
        const auto& v = L.faces[f].v;
        Vec2 p = L.points[v[2]] - L.points[v[0]];
        Vec2 q = L.points[v[3]] - L.points[v[1]];
        Vec2 rg = rot90(face_gradient(L, f, u));
        out[v[0]] += dot(rg, q);
        out[v[1]] -= dot(rg, p);
        out[v[2]] -= dot(rg, q);
        out[v[3]] += dot(rg, p);
    }
    return out;
}

double analytic_residual(const QuadLattice& L, const ComplexVertexFunction& f) {
    check_size(L, f.size());
    double worst = 0.0;
    for (int k = 0; k < L.face_count(); ++k) {
        const auto& v = L.faces[k].v;
        Complex d13 = L.z(v[0]) - L.z(v[2]);
        Complex d24 = L.z(v[1]) - L.z(v[3]);
        if (d13 == Complex{0.0, 0.0} || d24 == Complex{0.0, 0.0})
            throw DegenerateDiagonal("face " + std::to_string(k) + " has coincident diagonal endpoints");
        Complex r = (f[v[0]] - f[v[2]]) / d13 - (f[v[1]] - f[v[3]]) / d24;
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

} // namespace dca
