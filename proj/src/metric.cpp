#include "mobius/metric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mobius/errors.hpp"

namespace mobius {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Group closure of the (L,R) maps q -> L q R.  Composition of (L1,R1) after
// (L2,R2) is (L1 L2, R2 R1).
std::vector<std::pair<Mat, Mat>> orbit_closure(const GroupId& m,
                                               const std::vector<std::pair<Mat, Mat>>& gens) {
    std::vector<std::pair<Mat, Mat>> maps;
    maps.emplace_back(Mat::identity(m.field, m.n), Mat::identity(m.field, m.n));
    auto known = [&](const Mat& l, const Mat& r) {
        for (const auto& [kl, kr] : maps)
            if (max_abs(kl - l) < 1e-12 && max_abs(kr - r) < 1e-12) return true;
        return false;
    };
    for (const auto& [l, r] : gens)
        if (!known(l, r)) maps.emplace_back(l, r);
    bool grew = true;
    while (grew) {
        grew = false;
        const size_t sz = maps.size();
        for (size_t i = 0; i < sz && maps.size() < 256; ++i)
            for (size_t j = 0; j < sz && maps.size() < 256; ++j) {
                Mat l = matmul(maps[i].first, maps[j].first);
                Mat r = matmul(maps[j].second, maps[i].second);
                if (!known(l, r)) {
                    maps.emplace_back(std::move(l), std::move(r));
                    grew = true;
                }
            }
        if (maps.size() >= 256)
            throw ConfigError("orbit_generators", "symmetrization closure exceeds 256 maps");
    }
    return maps;
}

}  // namespace

SampleSet build_samples(const GroupId& m, const QuadratureSpec& spec) {
    if (m.kind != Kind::Compact) throw ShapeError("build_samples: need a compact group");
    SampleSet s;
    s.m = m;
    s.mass = spec.mass_override > 0 ? spec.mass_override : haar_mass(m);
    s.workers = spec.workers;
    if (spec.mode == QuadMode::WeylTorus) {
        if (spec.grid <= 0) throw ConfigError("grid", "torus grid must be positive");
        s.monte_carlo = false;
        s.orbit_size = 1;
        const int r = rank(m);
        const int g = spec.grid;
        long total = 1;
        for (int i = 0; i < r; ++i) total *= g;
        const double cell = std::pow(kTwoPi / g, r);
        std::vector<double> theta(r);
        std::vector<int> idx(r, 0);
        const double mass_scale = spec.mass_override > 0 ? spec.mass_override / haar_mass(m) : 1.0;
        for (long it = 0; it < total; ++it) {
            long rem = it;
            for (int i = 0; i < r; ++i) {
                idx[i] = static_cast<int>(rem % g);
                rem /= g;
                theta[i] = kTwoPi * idx[i] / g;
            }
            double w = mass_scale * weyl_density(m, theta) * cell;
            if (w <= 1e-300) continue;  // density zeros carry no weight
            s.points.push_back(torus_point(m, theta));
            s.weights.push_back(w);
        }
        s.base_count = static_cast<long>(s.points.size());
        return s;
    }
    if (spec.samples <= 0) throw ConfigError("samples", "Monte Carlo sample count must be positive");
    auto maps = orbit_closure(m, spec.orbit_generators);
    int orbit = static_cast<int>(maps.size()) * (spec.conj_orbit ? 2 : 1);
    long base = std::max(1L, spec.samples / orbit);
    Rng rng(spec.seed);
    s.monte_carlo = true;
    s.orbit_size = orbit;
    s.base_count = base;
    s.points.reserve(base * orbit);
    for (long b = 0; b < base; ++b) {
        Mat q = haar_sample(m, rng);
        for (const auto& [l, r] : maps) {
            Mat p = matmul(l, matmul(q, r));
            if (spec.conj_orbit) s.points.push_back(conj_entries(p));
            s.points.push_back(std::move(p));
        }
    }
    const double w = s.mass / static_cast<double>(s.points.size());
    s.weights.assign(s.points.size(), w);
    return s;
}

namespace {

// Per-worker scratch for the Gram kernel.
struct GramScratch {
    Mat den, dwork, dinv, num, p, pzb, w_tmp;
    std::vector<Mat> w;  // induced fields per direction

    GramScratch(Field f, int n, int d)
        : den(f, n, n),
          dwork(f, n, n),
          dinv(f, n, n),
          num(f, n, n),
          p(f, n, n),
          pzb(f, n, 2 * n),
          w_tmp(f, n, n),
          w(d, Mat(f, n, n)) {}
};

// In-place inverse with caller scratch; same elimination as inverse().
void inverse_into(Mat& dst, Mat& work, const Mat& a) {
    const int n = a.rows();
    work = a;
    dst = Mat::identity(a.field(), n);
    const double threshold = 1e-12 * std::max(max_abs(a), 1e-300);
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = qnorm(work.at(col, col));
        for (int r = col + 1; r < n; ++r) {
            double v = qnorm(work.at(r, col));
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best < threshold) throw SingularMatrixError(best);
        if (piv != col)
            for (int j = 0; j < n; ++j) {
                std::swap(work.at(piv, j), work.at(col, j));
                std::swap(dst.at(piv, j), dst.at(col, j));
            }
        Quat pinvq = qinv(work.at(col, col));
        for (int j = 0; j < n; ++j) {
            work.at(col, j) = qmul(pinvq, work.at(col, j));
            dst.at(col, j) = qmul(pinvq, dst.at(col, j));
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            Quat f = work.at(r, col);
            if (qnormsq(f) == 0.0) continue;
            for (int j = 0; j < n; ++j) {
                work.at(r, j) -= qmul(f, work.at(col, j));
                dst.at(r, j) -= qmul(f, dst.at(col, j));
            }
        }
    }
}

}  // namespace

RealMat field_gram(const GroupId& g_id, const Mat& gmat, const std::vector<Mat>& zs,
                   const SampleSet& samples, RealMat* std_errors) {
    const int n = g_id.n;
    const int d = static_cast<int>(zs.size());
    const long nsamp = static_cast<long>(samples.points.size());
    if (nsamp == 0) throw ConfigError("samples", "empty sample set");
    const int npairs = d * (d + 1) / 2;

    // Split each direction into its top and bottom block rows once.
    std::vector<Mat> ztop(d), zbot(d);
    for (int i = 0; i < d; ++i) {
        ztop[i] = block(zs[i], 0, 0, n, 2 * n);
        zbot[i] = block(zs[i], n, 0, n, 2 * n);
    }
    const Mat ga = block(gmat, 0, 0, n, n);
    const Mat gb = block(gmat, 0, n, n, n);
    const Mat gc = block(gmat, n, 0, n, n);
    const Mat gd = block(gmat, n, n, n, n);

    // Per-sample weighted contributions, pair-major, reduced by a fixed
    // pairwise tree afterwards so the result is independent of the thread
    // partition.
    std::vector<double> buf(static_cast<size_t>(npairs) * nsamp);

    parallel_for_blocks(nsamp, samples.workers, [&](long lo, long hi) {
        GramScratch sc(g_id.field, n, d);
        for (long si = lo; si < hi; ++si) {
            const Mat& q = samples.points[si];
            // p = (A q + B)(C q + D)^{-1}
            matmul_into(sc.den, gc, q);
            sc.den += gd;
            inverse_into(sc.dinv, sc.dwork, sc.den);
            matmul_into(sc.num, ga, q);
            sc.num += gb;
            matmul_into(sc.p, sc.num, sc.dinv);
            // W_i = (Z11 - p Z21) p + (Z12 - p Z22)
            for (int i = 0; i < d; ++i) {
                matmul_into(sc.pzb, sc.p, zbot[i]);
                for (int r = 0; r < n; ++r)
                    for (int c = 0; c < 2 * n; ++c)
                        sc.pzb.at(r, c) = ztop[i].at(r, c) - sc.pzb.at(r, c);
                // left half times p plus right half
                for (int r = 0; r < n; ++r)
                    for (int c = 0; c < n; ++c) sc.w_tmp.at(r, c) = sc.pzb.at(r, c);
                matmul_into(sc.w[i], sc.w_tmp, sc.p);
                for (int r = 0; r < n; ++r)
                    for (int c = 0; c < n; ++c) sc.w[i].at(r, c) += sc.pzb.at(r, n + c);
            }
            const double wgt = samples.weights[si];
            int pr = 0;
            for (int i = 0; i < d; ++i)
                for (int j = i; j < d; ++j, ++pr)
                    buf[static_cast<size_t>(pr) * nsamp + si] = wgt * frob_inner(sc.w[i], sc.w[j]);
        }
    });

    RealMat gram(d, d);
    if (std_errors) *std_errors = RealMat(d, d);
    int pr = 0;
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j, ++pr) {
            std::span<const double> row(buf.data() + static_cast<size_t>(pr) * nsamp,
                                        static_cast<size_t>(nsamp));
            double total = pairwise_sum(row);
            gram.at(i, j) = gram.at(j, i) = total;
            if (std_errors) {
                double se = 0.0;
                if (samples.monte_carlo && samples.base_count > 1) {
                    // Block the orbit copies together: copies of one draw are
                    // dependent, blocks are i.i.d.
                    const long nb = samples.base_count;
                    const int orb = samples.orbit_size;
                    const double mean_block = total / nb;
                    double var = 0.0;
                    for (long b = 0; b < nb; ++b) {
                        double s = 0.0;
                        for (int o = 0; o < orb; ++o) s += row[b * orb + o];
                        double dev = s - mean_block;
                        var += dev * dev;
                    }
                    var /= (nb - 1);
                    se = std::sqrt(var * nb);  // sd of the total over nb iid blocks
                }
                std_errors->at(i, j) = std_errors->at(j, i) = se;
            }
        }
    return gram;
}

MetricValue inner(const MobiusElement& g, const Mat& x, const Mat& y, const QuadratureSpec& spec) {
    return inner(g, x, y, build_samples(compact_of(g.group), spec));
}

MetricValue inner(const MobiusElement& g, const Mat& x, const Mat& y, const SampleSet& samples) {
    Mat ginv = inverse(g.m);
    Mat zx = matmul(x, ginv);
    Mat zy = matmul(y, ginv);
    double rx = lie_residual(g.group, zx), ry = lie_residual(g.group, zy);
    if (rx > 1e-8) throw TangencyError(rx);
    if (ry > 1e-8) throw TangencyError(ry);
    std::vector<Mat> zs{zx, zy};
    RealMat se;
    RealMat gram = field_gram(g.group, g.m, zs, samples, &se);
    return {gram.at(0, 1), se.at(0, 1)};
}

double isometry_residual(const Mat& k1, const Mat& k2, const MobiusElement& g, const Mat& x,
                         const QuadratureSpec& spec) {
    const GroupId& gid = g.group;
    const int n = gid.n;
    auto check_k = [&](const Mat& k) {
        double res = is_member(gid, k);
        res = std::max(res, max_abs(block(k, 0, n, n, n)));
        res = std::max(res, max_abs(block(k, n, 0, n, n)));
        if (res > 1e-9) throw MembershipError("isometry_residual: k is not in K", res);
    };
    check_k(k1);
    check_k(k2);

    SampleSet base = build_samples(compact_of(gid), spec);
    MetricValue lhs = inner(g, x, x, base);

    // Transported samples q -> k2 * q = A2 q B2^{-1}.
    Mat a2 = block(k2, 0, 0, n, n);
    Mat b2inv = inverse(block(k2, n, n, n, n));
    SampleSet moved = base;
    for (auto& q : moved.points) q = matmul(a2, matmul(q, b2inv));

    Mat k2inv = inverse(k2);
    Mat gprime = matmul(k1, matmul(g.m, k2inv));
    Mat xprime = matmul(k1, matmul(x, k2inv));
    MobiusElement gp(gid, gprime, false);
    MetricValue rhs = inner(gp, xprime, xprime, moved);

    double denom = std::max(std::abs(lhs.value), 1e-300);
    return std::abs(lhs.value - rhs.value) / denom;
}

RealMat metric_tensor(const MobiusElement& g, const std::vector<Mat>& basis,
                      const QuadratureSpec& spec, std::vector<double>* std_errors) {
    SampleSet samples = build_samples(compact_of(g.group), spec);
    Mat ginv = inverse(g.m);
    std::vector<Mat> zs;
    zs.reserve(basis.size());
    for (const Mat& b : basis) {
        Mat z = matmul(b, ginv);
        double res = lie_residual(g.group, z);
        if (res > 1e-8) throw TangencyError(res);
        zs.push_back(std::move(z));
    }
    RealMat se;
    RealMat gram = field_gram(g.group, g.m, zs, samples, std_errors ? &se : nullptr);
    if (std_errors) {
        std_errors->resize(basis.size());
        for (size_t i = 0; i < basis.size(); ++i) (*std_errors)[i] = se.at(static_cast<int>(i), static_cast<int>(i));
    }
    std::vector<double> eig;
    RealMat vecs;
    sym_eigen(gram, eig, vecs);
    if (eig.empty() || eig.front() <= 0.0) throw DegenerateMetricError(eig.empty() ? 0.0 : eig.front());
    return gram;
}

InclusionSymmetry inclusion_sample_symmetry(const GroupId& src, const GroupId& dst) {
    InclusionSymmetry sym;
    const GroupId m = compact_of(dst);
    auto unit_conj = [&](const Quat& u) {
        Mat l = Mat::zero(Field::H, m.n, m.n), r = Mat::zero(Field::H, m.n, m.n);
        for (int i = 0; i < m.n; ++i) {
            l.at(i, i) = u;
            r.at(i, i) = qconj(u);  // u^{-1} for unit u
        }
        return std::make_pair(l, r);
    };
    if (src.field == Field::R && dst.field == Field::C) {
        sym.needs_conj = true;  // fixed points of entrywise conjugation
        return sym;
    }
    if (src.field == Field::C && dst.field == Field::H) {
        sym.generators.push_back(unit_conj(Quat(0, 1, 0, 0)));
        return sym;
    }
    if (src.field == Field::R && dst.field == Field::H) {
        sym.generators.push_back(unit_conj(Quat(0, 1, 0, 0)));
        sym.generators.push_back(unit_conj(Quat(0, 0, 1, 0)));
        return sym;
    }
    if (src.field == Field::C && dst.field == Field::R && dst.n == 2 * src.n) {
        // J = diag(J0, ..., J0) conjugation on SO_{2n}.
        Mat j = Mat::zero(Field::R, dst.n, dst.n);
        for (int b = 0; b < src.n; ++b) {
            j.at(2 * b, 2 * b + 1) = Quat(-1.0);
            j.at(2 * b + 1, 2 * b) = Quat(1.0);
        }
        sym.generators.emplace_back(j, transpose(j));
        return sym;
    }
    if (src.field == Field::H && dst.field == Field::R && dst.n == 4 * src.n) {
        // Right multiplications R_i, R_j on H^n realified, conjugating SO_{4n}.
        Mat ri = Mat::zero(Field::R, dst.n, dst.n), rj = Mat::zero(Field::R, dst.n, dst.n);
        for (int b = 0; b < src.n; ++b) {
            int o = 4 * b;
            ri.at(o + 0, o + 1) = Quat(-1.0);
            ri.at(o + 1, o + 0) = Quat(1.0);
            ri.at(o + 2, o + 3) = Quat(1.0);
            ri.at(o + 3, o + 2) = Quat(-1.0);
            rj.at(o + 0, o + 2) = Quat(-1.0);
            rj.at(o + 1, o + 3) = Quat(-1.0);
            rj.at(o + 2, o + 0) = Quat(1.0);
            rj.at(o + 3, o + 1) = Quat(1.0);
        }
        sym.generators.emplace_back(ri, transpose(ri));
        sym.generators.emplace_back(rj, transpose(rj));
        return sym;
    }
    throw ShapeError("inclusion_sample_symmetry: unsupported pair " + group_name(src) + " -> " +
                     group_name(dst));
}

std::vector<std::pair<Mat, Mat>> unit_translation_symmetry(const GroupId& m) {
    if (m.field != Field::H) throw ShapeError("unit_translation_symmetry: quaternionic groups only");
    std::vector<std::pair<Mat, Mat>> gens;
    const Mat id = Mat::identity(Field::H, m.n);
    auto scaled = [&](const Quat& u) {
        Mat s = Mat::zero(Field::H, m.n, m.n);
        for (int i = 0; i < m.n; ++i) s.at(i, i) = u;
        return s;
    };
    const Quat units[3] = {Quat(0, 1, 0, 0), Quat(0, 0, 1, 0), Quat(0, 0, 0, 1)};
    for (const Quat& u : units) {
        gens.emplace_back(scaled(u), id);  // q -> u q
        gens.emplace_back(id, scaled(u));  // q -> q u
    }
    gens.emplace_back(scaled(Quat(-1.0)), id);  // q -> -q
    return gens;
}

}  // namespace mobius
