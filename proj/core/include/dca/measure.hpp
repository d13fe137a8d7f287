#pragma once

#include <cstdint>
#include <vector>

#include "dca/lattice.hpp"
#include "dca/operators.hpp"

namespace dca {

struct WalkConfig {
    int n_walks = 10000;
    std::uint64_t seed = 0;
    long max_steps = 0;       // safety cap, >= vertex count; 0 picks a generous default
    bool use_w_graph = false; // walk on the W diagonal graph instead of B
};

struct MeasureEstimate {
    double p_hat = 0.0;         // fraction of walks absorbed inside the arc
    double standard_error = 0.0; // sqrt(p_hat (1 - p_hat) / n_walks)
    long n_absorbed = 0;         // walks that reached the boundary
    long n_capped = 0;           // walks discarded at the step cap (count toward n_walks)
};

// Harmonic measure of a boundary arc: the Dirichlet solution with data 1 on
// the arc and 0 on the rest of the boundary. The arc must be a contiguous run
// of boundary-cycle vertices (any order, possibly empty). Orthogonal lattices
// only; throws NotOrthogonal / NotAnArc.
VertexFunction harmonic_measure_exact(const QuadLattice& L, const std::vector<int>& arc);

// Monte Carlo estimate: cfg.n_walks weighted random walks on the B diagonal
// graph (or W with cfg.use_w_graph) from an interior vertex of that color,
// with transition probability proportional to the diagonal conductances,
// absorbed on the boundary. Walk i draws from a SplitMix64 stream seeded with
// seed ^ i, so results are reproducible and order-independent. Walks that hit
// max_steps are dropped from the numerator and reported in n_capped.
MeasureEstimate random_walk_measure(const QuadLattice& L, const std::vector<int>& arc, int start,
                                    const WalkConfig& cfg);

} // namespace dca
