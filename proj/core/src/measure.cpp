#include "dca/measure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "dca/errors.hpp"
#include "dca/rng.hpp"
#include "dca/solver.hpp"

namespace dca {

namespace {

// An arc is a set of boundary vertices occupying one contiguous run of the
// boundary cycle (in either direction). Returns a membership mask.
std::vector<char> arc_mask(const QuadLattice& L, const std::vector<int>& arc) {
    std::vector<char> mask(L.points.size(), 0);
    if (arc.empty()) return mask;
    std::map<int, size_t> pos;
    for (size_t i = 0; i < L.boundary.size(); ++i) pos[L.boundary[i]] = i;
    std::set<size_t> at;
    for (int v : arc) {
        auto it = pos.find(v);
        if (it == pos.end())
            throw NotAnArc("vertex " + std::to_string(v) + " is not on the boundary");
        if (!at.insert(it->second).second)
            throw NotAnArc("vertex " + std::to_string(v) + " repeated in the arc");
    }
    // Contiguous on the cycle <=> the complement positions are contiguous,
    // i.e. the positions form one run when read cyclically: count the gaps.
    size_t n = L.boundary.size(), gaps = 0;
    if (at.size() < n) {
        for (size_t p : at)
            if (!at.count((p + 1) % n)) ++gaps;
        if (gaps != 1) throw NotAnArc("arc vertices are not contiguous on the boundary cycle");
    }
    for (int v : arc) mask[v] = 1;
    return mask;
}

} // namespace

VertexFunction harmonic_measure_exact(const QuadLattice& L, const std::vector<int>& arc) {
    if (L.kind == LatticeKind::general)
        throw NotOrthogonal("harmonic measure requires an orthogonal lattice");
    std::vector<char> mask = arc_mask(L, arc);
    std::map<int, double> g;
    for (int v : L.boundary) g[v] = mask[v] ? 1.0 : 0.0;
    return solve_dirichlet(L, g).solution;
}

MeasureEstimate random_walk_measure(const QuadLattice& L, const std::vector<int>& arc, int start,
                                    const WalkConfig& cfg) {
    if (L.kind == LatticeKind::general)
        throw NotOrthogonal("the weighted walk requires an orthogonal lattice");
    if (cfg.n_walks < 1) throw InvalidWalkConfig("n_walks must be at least 1");
    long max_steps = cfg.max_steps;
    if (max_steps == 0) max_steps = std::max(1000L, 100L * L.vertex_count());
    if (max_steps < L.vertex_count())
        throw InvalidWalkConfig("max_steps must be at least the vertex count");

    const Color walk_color = cfg.use_w_graph ? Color::W : Color::B;
    auto boundary = L.boundary_mask();
    if (start < 0 || start >= L.vertex_count() || boundary[start] ||
        L.color[start] != walk_color)
        throw InvalidWalkConfig("start must be an interior vertex of the walk color class");

    std::vector<char> in_arc = arc_mask(L, arc);

    // Diagonal-graph adjacency with conductance weights: a face contributes
    // weight |z4-z2|/|z3-z1| to its B diagonal and the reciprocal to its W
    // diagonal.
    struct Edge {
        int to;
        double w;
    };
    std::vector<std::vector<Edge>> adj(L.vertex_count());
    for (const Face& f : L.faces) {
        double lp = norm(L.points[f.v[2]] - L.points[f.v[0]]);
        double lq = norm(L.points[f.v[3]] - L.points[f.v[1]]);
        if (lp == 0.0 || lq == 0.0) throw DegenerateDiagonal("zero-length diagonal");
        int a = walk_color == Color::B ? f.v[0] : f.v[1];
        int b = walk_color == Color::B ? f.v[2] : f.v[3];
        double w = walk_color == Color::B ? lq / lp : lp / lq;
        adj[a].push_back({b, w});
        adj[b].push_back({a, w});
    }
    std::vector<double> total(L.vertex_count(), 0.0);
    for (int v = 0; v < L.vertex_count(); ++v)
        for (const Edge& e : adj[v]) total[v] += e.w;

    long hits = 0, absorbed = 0, capped = 0;
    for (int i = 0; i < cfg.n_walks; ++i) {
        SplitMix64 rng(cfg.seed ^ static_cast<std::uint64_t>(i));
        int at = start;
        bool done = false;
        for (long step = 0; step < max_steps; ++step) {
            double pick = rng.uniform() * total[at];
            double cum = 0.0;
            int next = adj[at].back().to;
            for (const Edge& e : adj[at]) {
                cum += e.w;
                if (pick < cum) {
                    next = e.to;
                    break;
                }
            }
            at = next;
            if (boundary[at]) {
                ++absorbed;
                if (in_arc[at]) ++hits;
                done = true;
                break;
            }
        }
        if (!done) ++capped;
    }

    MeasureEstimate est;
    est.n_absorbed = absorbed;
    est.n_capped = capped;
    est.p_hat = static_cast<double>(hits) / cfg.n_walks;
    est.standard_error = std::sqrt(est.p_hat * (1.0 - est.p_hat) / cfg.n_walks);
    return est;
}

} // namespace dca
