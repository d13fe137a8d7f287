#include "dca/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dca/errors.hpp"

namespace dca {

std::vector<double> SparseSym::multiply(const std::vector<double>& x) const {
    std::vector<double> y(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int k = rowptr[i]; k < rowptr[i + 1]; ++k) s += val[k] * x[col[k]];
        y[i] = s;
    }
    return y;
}

double SparseSym::quadratic_form(const std::vector<double>& u) const {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int k = rowptr[i]; k < rowptr[i + 1]; ++k) row += val[k] * u[col[k]];
        s += u[i] * row;
    }
    return s;
}

SparseSym SparseSym::submatrix(const std::vector<int>& keep) const {
    std::vector<int> place(n, -1);
    for (size_t i = 0; i < keep.size(); ++i) place[keep[i]] = static_cast<int>(i);
    SparseSym out;
    out.n = static_cast<int>(keep.size());
    out.rowptr.assign(out.n + 1, 0);
    for (int r = 0; r < out.n; ++r) {
        int i = keep[r];
        for (int k = rowptr[i]; k < rowptr[i + 1]; ++k)
            if (place[col[k]] >= 0) ++out.rowptr[r + 1];
    }
    for (int r = 0; r < out.n; ++r) out.rowptr[r + 1] += out.rowptr[r];
    out.col.resize(out.rowptr[out.n]);
    out.val.resize(out.rowptr[out.n]);
    for (int r = 0; r < out.n; ++r) {
        int i = keep[r];
        int at = out.rowptr[r];
        for (int k = rowptr[i]; k < rowptr[i + 1]; ++k) {
            int c = place[col[k]];
            if (c >= 0) {
                out.col[at] = c;
                out.val[at] = val[k];
                ++at;
            }
        }
    }
    return out;
}

SparseSym TripletBuilder::compress() const {
    // Bucket the triplets by row with a counting pass instead of a global
    // comparison sort: row degrees are bounded by the lattice geometry, so the
    // per-row sorts keep the whole pass linear in the number of triplets.
    std::vector<int> start(n_ + 1, 0);
    for (const Entry& e : entries_) ++start[e.i + 1];
    for (int i = 0; i < n_; ++i) start[i + 1] += start[i];

    std::vector<std::pair<int, double>> bucket(entries_.size());
    std::vector<int> fill(start.begin(), start.end() - 1);
    for (const Entry& e : entries_) bucket[fill[e.i]++] = {e.j, e.v};

    SparseSym m;
    m.n = n_;
    m.rowptr.assign(n_ + 1, 0);
    m.col.reserve(entries_.size());
    m.val.reserve(entries_.size());
    for (int i = 0; i < n_; ++i) {
        auto first = bucket.begin() + start[i];
        auto last = bucket.begin() + start[i + 1];
        // Stable so duplicates accumulate in insertion order.
        std::stable_sort(first, last,
                         [](const std::pair<int, double>& a, const std::pair<int, double>& b) {
                             return a.first < b.first;
                         });
        for (auto it = first; it != last;) {
            const int j = it->first;
            double sum = 0.0;
            while (it != last && it->first == j) {
                sum += it->second;
                ++it;
            }
            m.col.push_back(j);
            m.val.push_back(sum);
            ++m.rowptr[i + 1];
        }
    }
    for (int i = 0; i < n_; ++i) m.rowptr[i + 1] += m.rowptr[i];
    return m;
}

namespace {
double dot_fixed(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}
double norm2_fixed(const std::vector<double>& a) { return std::sqrt(dot_fixed(a, a)); }
} // namespace

CgResult pcg_jacobi(const SparseSym& A, const std::vector<double>& b,
                    std::vector<double>& x, double tol_rel, int max_iter) {
    const int n = A.n;
    CgResult res;
    x.resize(n, 0.0);

    const double bnorm = norm2_fixed(b);
    if (bnorm == 0.0) {
        x.assign(n, 0.0);
        res.converged = true;
        return res;
    }
    const double target = tol_rel * bnorm;

    std::vector<double> dinv(n);
    for (int i = 0; i < n; ++i) {
        double d = 0.0;
        for (int k = A.rowptr[i]; k < A.rowptr[i + 1]; ++k)
            if (A.col[k] == i) d = A.val[k];
        if (d <= 0.0) throw SolverDiverged("non-positive diagonal in SPD solve");
        dinv[i] = 1.0 / d;
    }

    std::vector<double> r(n), z(n), p(n), ap;
    {
        std::vector<double> ax = A.multiply(x);
        for (int i = 0; i < n; ++i) r[i] = b[i] - ax[i];
    }
    for (int i = 0; i < n; ++i) z[i] = dinv[i] * r[i];
    p = z;
    double rz = dot_fixed(r, z);

    double true_res = norm2_fixed(r);
    res.residual = true_res;
    if (true_res <= target) {
        res.converged = true;
        return res;
    }

    for (int it = 1; it <= max_iter; ++it) {
        ap = A.multiply(p);
        double pap = dot_fixed(p, ap);
        if (pap <= 0.0) throw SolverDiverged("matrix not positive definite in CG");
        double alpha = rz / pap;
        for (int i = 0; i < n; ++i) x[i] += alpha * p[i];
        for (int i = 0; i < n; ++i) r[i] -= alpha * ap[i];
        res.iterations = it;

        // Cheap check on the recurrence residual; confirm against the true
        // residual (recomputed) before declaring convergence, since the two
        // drift apart in finite precision.
        if (norm2_fixed(r) <= target || it % 64 == 0 || it == max_iter) {
            std::vector<double> ax = A.multiply(x);
            for (int i = 0; i < n; ++i) r[i] = b[i] - ax[i];
            true_res = norm2_fixed(r);
            res.residual = true_res;
            if (true_res <= target) {
                res.converged = true;
                return res;
            }
        }
        for (int i = 0; i < n; ++i) z[i] = dinv[i] * r[i];
        double rz_new = dot_fixed(r, z);
        double beta = rz_new / rz;
        rz = rz_new;
        for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    res.converged = false;
    return res;
}

bool cholesky_factor(std::vector<double>& a, int n) {
    for (int j = 0; j < n; ++j) {
        double d = a[j * n + j];
        for (int k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
        if (d <= 0.0) return false;
        d = std::sqrt(d);
        a[j * n + j] = d;
        for (int i = j + 1; i < n; ++i) {
            double s = a[i * n + j];
            for (int k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
            a[i * n + j] = s / d;
        }
    }
    return true;
}

void cholesky_solve(const std::vector<double>& l, int n, std::vector<double>& b) {
    for (int i = 0; i < n; ++i) {
        double s = b[i];
        for (int k = 0; k < i; ++k) s -= l[i * n + k] * b[k];
        b[i] = s / l[i * n + i];
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int k = i + 1; k < n; ++k) s -= l[k * n + i] * b[k];
        b[i] = s / l[i * n + i];
    }
}

std::vector<double> dense_spd_solve(const SparseSym& A, const std::vector<double>& b) {
    const int n = A.n;
    std::vector<double> dense(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int k = A.rowptr[i]; k < A.rowptr[i + 1]; ++k)
            dense[static_cast<size_t>(i) * n + A.col[k]] = A.val[k];
    if (!cholesky_factor(dense, n))
        throw SolverDiverged("dense Cholesky failed: matrix not positive definite");
    std::vector<double> x = b;
    cholesky_solve(dense, n, x);
    return x;
}

} // namespace dca
