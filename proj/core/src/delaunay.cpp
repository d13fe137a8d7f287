#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "dca/fem.hpp"
#include "dca/rng.hpp"

namespace dca {

namespace {

// > 0 when d lies strictly inside the circumcircle of the ccw triangle abc.
double incircle(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    double ax = a.x - d.x, ay = a.y - d.y;
    double bx = b.x - d.x, by = b.y - d.y;
    double cx = c.x - d.x, cy = c.y - d.y;
    double a2 = ax * ax + ay * ay, b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
    return ax * (by * c2 - cy * b2) - ay * (bx * c2 - cx * b2) + a2 * (bx * cy - cx * by);
}

// Lawson flips: repeatedly replace the diagonal of any quad that strictly
// violates the in-circle condition. Terminates at a Delaunay triangulation
// (ties are left alone, so exactly cocircular outer-ring points cannot make
// the pass oscillate).
void lawson_flips(Triangulation& T) {
    for (int pass = 0; pass < 64; ++pass) {
        std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> edges; // edge -> (tri, opp)
        for (int t = 0; t < T.triangle_count(); ++t)
            for (int k = 0; k < 3; ++k) {
                int a = T.triangles[t][k], b = T.triangles[t][(k + 1) % 3];
                edges[{std::min(a, b), std::max(a, b)}].push_back({t, T.triangles[t][(k + 2) % 3]});
            }
        bool flipped = false;
        std::vector<char> dirty(T.triangle_count(), 0);
        for (const auto& [e, uses] : edges) {
            if (uses.size() != 2) continue;
            auto [t1, p] = uses[0];
            auto [t2, q] = uses[1];
            if (dirty[t1] || dirty[t2]) continue; // stale opposite info this pass
            Vec2 u = T.points[e.first], v = T.points[e.second];
            double scale = std::max({norm2(u - v), norm2(T.points[p] - u), norm2(T.points[q] - u)});
            // Strictly violating: q inside circumcircle of (u, v, p) as a ccw triple.
            Vec2 a = u, b = v;
            if (cross(b - a, T.points[p] - a) < 0.0) std::swap(a, b);
            if (incircle(a, b, T.points[p], T.points[q]) <= 1e-10 * scale * scale) continue;
            auto ccw = [&](int i, int j, int k) {
                std::array<int, 3> tr = {i, j, k};
                if (cross(T.points[j] - T.points[i], T.points[k] - T.points[i]) < 0.0)
                    std::swap(tr[1], tr[2]);
                return tr;
            };
            T.triangles[t1] = ccw(p, q, e.first);
            T.triangles[t2] = ccw(p, q, e.second);
            dirty[t1] = dirty[t2] = 1;
            flipped = true;
        }
        if (!flipped) return;
    }
}

} // namespace

// Ring mesh: center vertex, then ring k (k = 1..R) of 8k points near radius
// k/R. Interior vertices are jittered (<= 6% radially, <= 25% of the angular
// spacing); the outer ring stays on the exact unit circle so the boundary is
// a clean convex cycle. Rings are stitched with a two-pointer merge over the
// parametric angles, which keeps every boundary triangle to one boundary side
// with an acute opposite angle, and keeps the opposite-angle slack of the
// near-equilateral mesh strictly positive under the jitter bound.
Triangulation make_disk_triangulation(int rings, std::uint64_t seed) {
    if (rings < 1) throw std::invalid_argument("need at least one ring");
    SplitMix64 rng(seed);

    Triangulation T;
    T.points.push_back({0.0, 0.0});
    std::vector<int> ring_start(rings + 1, 0); // ring k occupies [start, start + 8k)
    for (int k = 1; k <= rings; ++k) {
        ring_start[k] = static_cast<int>(T.points.size());
        const int m = 8 * k;
        for (int j = 0; j < m; ++j) {
            double theta = 2.0 * kPi * j / m;
            double r = static_cast<double>(k) / rings;
            if (k < rings) {
                theta += (rng.uniform() - 0.5) * 0.5 * (2.0 * kPi / m);
                r += (rng.uniform() - 0.5) * 0.2 / rings; // <= 10% of the ring gap
            }
            T.points.push_back({r * std::cos(theta), r * std::sin(theta)});
        }
    }

    auto push = [&](int a, int b, int c) {
        if (cross(T.points[b] - T.points[a], T.points[c] - T.points[a]) < 0.0) std::swap(b, c);
        T.triangles.push_back({a, b, c});
    };
    for (int j = 0; j < 8; ++j) push(0, ring_start[1] + j, ring_start[1] + (j + 1) % 8);
    for (int k = 2; k <= rings; ++k) {
        const int na = 8 * (k - 1), nb = 8 * k;
        const int sa = ring_start[k - 1], sb = ring_start[k];
        int i = 0, j = 0;
        while (i < na || j < nb) {
            // Advance along whichever ring yields the shorter new diagonal,
            // so the stitch adapts to the jittered positions.
            bool step_inner;
            if (i >= na) {
                step_inner = false;
            } else if (j >= nb) {
                step_inner = true;
            } else {
                double d_inner = norm2(T.points[sa + (i + 1) % na] - T.points[sb + j % nb]);
                double d_outer = norm2(T.points[sa + i % na] - T.points[sb + (j + 1) % nb]);
                step_inner = d_inner < d_outer;
            }
            if (step_inner) {
                push(sa + i % na, sa + (i + 1) % na, sb + j % nb);
                ++i;
            } else {
                push(sa + i % na, sb + j % nb, sb + (j + 1) % nb);
                ++j;
            }
        }
    }
    for (int j = 0; j < 8 * rings; ++j) T.boundary.push_back(ring_start[rings] + j);
    lawson_flips(T);
    return T;
}

} // namespace dca
