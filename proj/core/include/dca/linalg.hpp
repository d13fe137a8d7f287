#pragma once

#include <vector>

namespace dca {

// Compressed sparse row storage for a symmetric real matrix. Both triangles
// are stored so that matvec is a plain row sweep with a fixed summation order
// (bit-reproducible run to run).
struct SparseSym {
    int n = 0;
    std::vector<int> rowptr; // size n+1
    std::vector<int> col;
    std::vector<double> val;

    std::vector<double> multiply(const std::vector<double>& x) const;
    double quadratic_form(const std::vector<double>& u) const; // u^T A u
    // Extracts the principal submatrix on `keep` (indices sorted ascending).
    SparseSym submatrix(const std::vector<int>& keep) const;
};

// Accumulates (i, j, value) triplets and compresses them into CSR, merging
// duplicates in sorted order. Deterministic for a fixed insertion sequence.
class TripletBuilder {
public:
    explicit TripletBuilder(int n) : n_(n) {}
    void reserve(size_t count) { entries_.reserve(count); }
    void add(int i, int j, double v) { entries_.push_back({i, j, v}); }
    SparseSym compress() const;

private:
    struct Entry {
        int i, j;
        double v;
    };
    int n_;
    std::vector<Entry> entries_;
};

struct CgResult {
    int iterations = 0;
    double residual = 0.0; // final true-residual 2-norm
    bool converged = false;
};

// Jacobi-preconditioned conjugate gradient for SPD systems. Stops when the
// recomputed true residual satisfies ||b - Ax||_2 <= tol_rel * ||b||_2 (or an
// absolute floor when b = 0). Inner products use a fixed summation order.
CgResult pcg_jacobi(const SparseSym& A, const std::vector<double>& b,
                    std::vector<double>& x, double tol_rel, int max_iter);

// Dense Cholesky (LL^T) for the direct fallback on small systems.
// Returns false if the matrix is not positive definite.
bool cholesky_factor(std::vector<double>& a, int n);
void cholesky_solve(const std::vector<double>& l, int n, std::vector<double>& b);

// Dense direct solve of a SparseSym system; throws SolverDiverged when the
// matrix is not SPD.
std::vector<double> dense_spd_solve(const SparseSym& A, const std::vector<double>& b);

} // namespace dca
