#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace mobius {

/// Dense real symmetric/general helpers for the small (d <= ~40) systems the
/// chart machinery produces.  Row-major.
struct RealMat {
    int rows = 0, cols = 0;
    std::vector<double> a;

    RealMat() = default;
    RealMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}
    double& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    double at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }
    static RealMat identity(int n) {
        RealMat m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
        return m;
    }
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
/// Returns eigenvalues ascending; V columns are the eigenvectors.
void sym_eigen(const RealMat& s, std::vector<double>& eigenvalues, RealMat& eigenvectors);

/// Solve S x = b for symmetric positive definite S via Cholesky.
/// Throws DegenerateMetricError when a diagonal pivot is not positive.
std::vector<double> spd_solve(const RealMat& s, std::span<const double> b);

/// Orthonormal basis of the nullspace of M (tall or wide), via the Gram
/// matrix M^T M and a Jacobi eigensolve.  Gram eigenvalues below
/// tol * max_eig count as null.
std::vector<std::vector<double>> nullspace(const RealMat& m, double tol = 1e-9);

/// Deterministic fixed-tree pairwise sum: the result depends only on the
/// element order, never on thread count.
double pairwise_sum(std::span<const double> v);

/// Runs fn(begin, end) over a partition of [0, n) on `workers` threads
/// (0 = hardware concurrency).  Blocks until done.
void parallel_for_blocks(long n, int workers, const std::function<void(long, long)>& fn);

/// Deterministic RNG: mt19937_64 plus an explicit Box-Muller normal so the
/// stream does not depend on the standard library's distribution choices.
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}
    double uniform() {  // [0, 1)
        return (gen_() >> 11) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal();
    uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace mobius
