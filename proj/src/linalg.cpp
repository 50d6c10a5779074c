#include "mobius/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "mobius/errors.hpp"

namespace mobius {

void sym_eigen(const RealMat& s, std::vector<double>& eigenvalues, RealMat& eigenvectors) {
    const int n = s.rows;
    RealMat a = s;
    RealMat v = RealMat::identity(n);
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += a.at(p, q) * a.at(p, q);
        if (off < 1e-28 * std::max(1.0, std::abs(a.at(0, 0)))) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                double apq = a.at(p, q);
                if (std::abs(apq) < 1e-300) continue;
                double theta = (a.at(q, q) - a.at(p, p)) / (2.0 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double sn = t * c;
                for (int k = 0; k < n; ++k) {
                    double akp = a.at(k, p), akq = a.at(k, q);
                    a.at(k, p) = c * akp - sn * akq;
                    a.at(k, q) = sn * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = a.at(p, k), aqk = a.at(q, k);
                    a.at(p, k) = c * apk - sn * aqk;
                    a.at(q, k) = sn * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    double vkp = v.at(k, p), vkq = v.at(k, q);
                    v.at(k, p) = c * vkp - sn * vkq;
                    v.at(k, q) = sn * vkp + c * vkq;
                }
            }
    }
    eigenvalues.resize(n);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> diag(n);
    for (int i = 0; i < n; ++i) diag[i] = a.at(i, i);
    std::sort(order.begin(), order.end(), [&](int i, int j) { return diag[i] < diag[j]; });
    eigenvectors = RealMat(n, n);
    for (int j = 0; j < n; ++j) {
        eigenvalues[j] = diag[order[j]];
        for (int i = 0; i < n; ++i) eigenvectors.at(i, j) = v.at(i, order[j]);
    }
}

std::vector<double> spd_solve(const RealMat& s, std::span<const double> b) {
    const int n = s.rows;
    RealMat l(n, n);
    for (int j = 0; j < n; ++j) {
        double d = s.at(j, j);
        for (int k = 0; k < j; ++k) d -= l.at(j, k) * l.at(j, k);
        if (d <= 0.0) throw DegenerateMetricError(d);
        l.at(j, j) = std::sqrt(d);
        for (int i = j + 1; i < n; ++i) {
            double x = s.at(i, j);
            for (int k = 0; k < j; ++k) x -= l.at(i, k) * l.at(j, k);
            l.at(i, j) = x / l.at(j, j);
        }
    }
    std::vector<double> y(n), x(n);
    for (int i = 0; i < n; ++i) {
        double t = b[i];
        for (int k = 0; k < i; ++k) t -= l.at(i, k) * y[k];
        y[i] = t / l.at(i, i);
    }
    for (int i = n - 1; i >= 0; --i) {
        double t = y[i];
        for (int k = i + 1; k < n; ++k) t -= l.at(k, i) * x[k];
        x[i] = t / l.at(i, i);
    }
    return x;
}

std::vector<std::vector<double>> nullspace(const RealMat& m, double tol) {
    const int n = m.cols;
    RealMat gram(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double s = 0.0;
            for (int r = 0; r < m.rows; ++r) s += m.at(r, i) * m.at(r, j);
            gram.at(i, j) = gram.at(j, i) = s;
        }
    std::vector<double> eig;
    RealMat vecs;
    sym_eigen(gram, eig, vecs);
    double maxeig = std::max(eig.empty() ? 0.0 : eig.back(), 1e-300);
    std::vector<std::vector<double>> out;
    for (int j = 0; j < n; ++j)
        if (eig[j] < tol * maxeig) {
            std::vector<double> v(n);
            for (int i = 0; i < n; ++i) v[i] = vecs.at(i, j);
            out.push_back(std::move(v));
        }
    return out;
}

double pairwise_sum(std::span<const double> v) {
    const size_t n = v.size();
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    size_t half = n / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

void parallel_for_blocks(long n, int workers, const std::function<void(long, long)>& fn) {
    if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    workers = static_cast<int>(std::min<long>(workers, std::max(1L, n)));
    if (workers == 1 || n < 2) {
        fn(0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    long chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        long lo = w * chunk;
        long hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
    }
    for (auto& th : pool) th.join();
}

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = 0.0;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

}  // namespace mobius
