#include "mobius/geodesic.hpp"

#include <algorithm>
#include <cmath>

#include "mobius/errors.hpp"

namespace mobius {

Chart make_chart(const GroupId& g, const Mat& center) { return make_chart(g, center, lie_basis(g)); }

Chart make_chart(const GroupId& g, const Mat& center, std::vector<Mat> basis) {
    Chart c{g, center, std::move(basis), 0.5};
    double res = is_member(g, center);
    if (res > 1e-7) throw MembershipError("chart center not in " + group_name(g), res);
    return c;
}

Mat chart_algebra(const Chart& c, std::span<const double> x) {
    Mat a = Mat::zero(c.g.field, mat_size(c.g), mat_size(c.g));
    for (size_t i = 0; i < c.basis.size(); ++i) {
        if (x[i] == 0.0) continue;
        Mat t = c.basis[i];
        t *= x[i];
        a += t;
    }
    return a;
}

Mat chart_point(const Chart& c, std::span<const double> x) {
    return matmul(mexp(chart_algebra(c, x)), c.center);
}

std::vector<Mat> chart_frame(const Chart& c, std::span<const double> x) {
    const Mat a = chart_algebra(c, x);
    std::vector<Mat> frame;
    frame.reserve(c.basis.size());
    for (const Mat& e : c.basis) {
        // dexp_A(E) = sum_{m>=0} ad_A^m(E) / (m+1)!
        Mat term = e;
        Mat sum = e;
        double fact = 1.0;
        for (int m = 1; m <= 16; ++m) {
            term = matmul(a, term) - matmul(term, a);
            fact *= (m + 1);
            Mat scaled = term;
            scaled *= 1.0 / fact;
            sum += scaled;
            if (max_abs(scaled) < 1e-16) break;
        }
        frame.push_back(std::move(sum));
    }
    return frame;
}

RealMat chart_metric(const Chart& c, std::span<const double> x, const SampleSet& samples) {
    Mat g = chart_point(c, x);
    std::vector<Mat> zs = chart_frame(c, x);
    return field_gram(c.g, g, zs, samples, nullptr);
}

namespace {

// Metric and all first partials by central differences; shared by the
// christoffel op and the integrator.
struct MetricJet {
    RealMat g;                  // d x d
    std::vector<RealMat> dg;    // d matrices, dg[k] = d g / d x_k
};

MetricJet metric_jet(const Chart& c, std::span<const double> x, const SampleSet& samples, double h) {
    const int d = static_cast<int>(c.basis.size());
    MetricJet jet;
    jet.g = chart_metric(c, x, samples);
    jet.dg.resize(d);
    std::vector<double> xp(x.begin(), x.end());
    for (int k = 0; k < d; ++k) {
        xp[k] = x[k] + h;
        RealMat gp = chart_metric(c, xp, samples);
        xp[k] = x[k] - h;
        RealMat gm = chart_metric(c, xp, samples);
        xp[k] = x[k];
        RealMat der(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) der.at(i, j) = (gp.at(i, j) - gm.at(i, j)) / (2.0 * h);
        jet.dg[k] = std::move(der);
    }
    return jet;
}

// Geodesic acceleration a with g a = -(dg_j v^j) v + 1/2 grad_v (v^T g v).
std::vector<double> acceleration(const MetricJet& jet, std::span<const double> v) {
    const int d = jet.g.rows;
    std::vector<double> rhs(d, 0.0);
    for (int i = 0; i < d; ++i) {
        double s = 0.0;
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                s += (jet.dg[j].at(i, k) - 0.5 * jet.dg[i].at(j, k)) * v[j] * v[k];
        rhs[i] = -s;
    }
    return spd_solve(jet.g, rhs);
}

double quad_form(const RealMat& g, std::span<const double> v) {
    double e = 0.0;
    for (int i = 0; i < g.rows; ++i)
        for (int j = 0; j < g.cols; ++j) e += g.at(i, j) * v[i] * v[j];
    return e;
}

double norm2(std::span<const double> x) {
    double s = 0.0;
    for (double t : x) s += t * t;
    return std::sqrt(s);
}

}  // namespace

std::vector<double> christoffel(const Chart& c, std::span<const double> x, const SampleSet& samples,
                                double h) {
    const int d = static_cast<int>(c.basis.size());
    MetricJet jet = metric_jet(c, x, samples, h);
    // Gamma_{ijk} = 1/2 (d_j g_{ik} + d_k g_{ij} - d_i g_{jk}), raise with g^{-1}.
    std::vector<double> gamma(static_cast<size_t>(d) * d * d, 0.0);
    std::vector<double> col(d);
    for (int j = 0; j < d; ++j)
        for (int k = j; k < d; ++k) {
            for (int i = 0; i < d; ++i)
                col[i] = 0.5 * (jet.dg[j].at(i, k) + jet.dg[k].at(i, j) - jet.dg[i].at(j, k));
            std::vector<double> up = spd_solve(jet.g, col);
            for (int l = 0; l < d; ++l) {
                gamma[static_cast<size_t>(l) * d * d + static_cast<size_t>(j) * d + k] = up[l];
                gamma[static_cast<size_t>(l) * d * d + static_cast<size_t>(k) * d + j] = up[l];
            }
        }
    return gamma;
}

std::vector<double> geodesic_acceleration(const Chart& c, std::span<const double> x,
                                          std::span<const double> v, const SampleSet& samples,
                                          double h) {
    MetricJet jet = metric_jet(c, x, samples, h);
    return acceleration(jet, v);
}

GeodesicState make_state(const GroupId& g, const Mat& g0, const Mat& z_velocity) {
    double res = lie_residual(g, z_velocity);
    if (res > 1e-8) throw TangencyError(res);
    GeodesicState s;
    s.chart = make_chart(g, g0);
    const int d = static_cast<int>(s.chart.basis.size());
    s.x.assign(d, 0.0);
    s.v.resize(d);
    for (int i = 0; i < d; ++i) s.v[i] = frob_inner(z_velocity, s.chart.basis[i]);
    return s;
}

Trajectory integrate(const GeodesicState& start, double total_time, double dt,
                     const QuadratureSpec& spec, double fd_step) {
    Trajectory traj;
    GeodesicState st = start;
    const int d = static_cast<int>(st.chart.basis.size());
    QuadratureSpec qs = spec;
    SampleSet samples = build_samples(compact_of(st.chart.g), qs);

    auto record = [&](double t) {
        Mat g = chart_point(st.chart, st.x);
        RealMat gm = chart_metric(st.chart, st.x, samples);
        double energy = 0.5 * quad_form(gm, st.v);
        traj.points.push_back({t, g, energy, is_member(st.chart.g, g)});
    };

    int escalations = 0;
    double t = 0.0;
    const int nsteps = static_cast<int>(std::llround(total_time / dt));
    record(0.0);
    for (int step = 0; step < nsteps; ++step) {
        // One RK4 step on (x, v); each stage rebuilds the metric jet at the
        // stage point with the same CRN sample set.
        std::vector<double> x0 = st.x, v0 = st.v;
        std::vector<std::vector<double>> kx(4), kv(4);
        try {
            for (int stage = 0; stage < 4; ++stage) {
                double scale = (stage == 1 || stage == 2) ? 0.5 : (stage == 3 ? 1.0 : 0.0);
                std::vector<double> xs(d), vs(d);
                for (int i = 0; i < d; ++i) {
                    double ddx = stage == 0 ? 0.0 : kx[stage - 1][i];
                    double ddv = stage == 0 ? 0.0 : kv[stage - 1][i];
                    xs[i] = x0[i] + dt * scale * ddx;
                    vs[i] = v0[i] + dt * scale * ddv;
                }
                MetricJet jet = metric_jet(st.chart, xs, samples, fd_step);
                kx[stage] = vs;
                kv[stage] = acceleration(jet, vs);
            }
        } catch (const DegenerateMetricError&) {
            if (escalations < 2) {
                ++escalations;
                ++traj.sample_escalations;
                qs.samples *= 4;
                samples = build_samples(compact_of(st.chart.g), qs);
                --step;
                continue;
            }
            traj.completed = false;
            traj.stop_time = t;
            traj.stop_reason = "metric degeneration (not positive definite after escalation)";
            traj.final_state = st;
            return traj;
        }
        for (int i = 0; i < d; ++i) {
            st.x[i] = x0[i] + dt / 6.0 * (kx[0][i] + 2 * kx[1][i] + 2 * kx[2][i] + kx[3][i]);
            st.v[i] = v0[i] + dt / 6.0 * (kv[0][i] + 2 * kv[1][i] + 2 * kv[2][i] + kv[3][i]);
        }
        t += dt;
        if (norm2(st.x) > 0.5 * st.chart.radius) {
            // Re-center: new chart at the current point, velocity re-expressed
            // through the dexp frame (basis is orthonormal).
            std::vector<Mat> frame = chart_frame(st.chart, st.x);
            Mat vel = Mat::zero(st.chart.g.field, mat_size(st.chart.g), mat_size(st.chart.g));
            for (int i = 0; i < d; ++i) {
                if (st.v[i] == 0.0) continue;
                Mat tmp = frame[i];
                tmp *= st.v[i];
                vel += tmp;
            }
            Mat new_center = chart_point(st.chart, st.x);
            st.chart = make_chart(st.chart.g, new_center, st.chart.basis);
            for (int i = 0; i < d; ++i) st.v[i] = frob_inner(vel, st.chart.basis[i]);
            std::fill(st.x.begin(), st.x.end(), 0.0);
            ++traj.recenters;
        }
        record(t);
    }
    traj.stop_time = t;
    st.t = t;
    traj.final_state = st;
    return traj;
}

LengthValue arc_length(const GroupId& g, const Curve& curve, double t0, double t1,
                       const QuadratureSpec& spec, int panels, bool sqrt_grade_upper) {
    if (panels < 2) panels = 2;
    if (panels % 2) ++panels;
    SampleSet samples = build_samples(compact_of(g), spec);

    auto speed = [&](double t, double* sigma) {
        CurveSample cs = curve(t);
        MobiusElement ge(g, cs.point, false);
        MetricValue m = inner(ge, cs.velocity, cs.velocity, samples);
        double s = std::sqrt(std::max(0.0, m.value));
        if (sigma) *sigma = s > 1e-12 ? m.std_error / (2.0 * s) : std::sqrt(std::max(0.0, m.std_error));
        return s;
    };

    // Optional substitution t = t1 - (t1 - t0)(1-u)^2 concentrating nodes at t1.
    auto node = [&](double u) {
        if (!sqrt_grade_upper) return t0 + (t1 - t0) * u;
        double w = 1.0 - u;
        return t1 - (t1 - t0) * w * w;
    };
    auto jacobian = [&](double u) {
        if (!sqrt_grade_upper) return t1 - t0;
        return 2.0 * (t1 - t0) * (1.0 - u);
    };

    const int n = panels;  // even
    std::vector<double> f(n + 1), fs(n + 1);
    for (int i = 0; i <= n; ++i) {
        double u = static_cast<double>(i) / n;
        double sg = 0.0;
        f[i] = speed(node(u), &sg) * jacobian(u);
        fs[i] = sg * jacobian(u);
    }
    auto simpson = [&](int stride) {
        double h = static_cast<double>(stride) / n;
        double s = f[0] + f[n];
        for (int i = stride; i < n; i += stride) s += (i / stride % 2 ? 4.0 : 2.0) * f[i];
        return s * h / 3.0;
    };
    double full = simpson(1);
    double half = simpson(2);
    double mc = 0.0;
    for (int i = 0; i <= n; ++i) mc += fs[i] / n;  // coarse propagated MC error
    return {full, std::abs(full - half) / 15.0 + mc};
}

double inclusion_residual(const GroupId& src, const GroupId& dst, const Mat& g) {
    auto comm = [&](const Mat& k) { return max_abs(matmul(k, g) - matmul(g, k)); };
    const int sz = mat_size(dst);
    if (src.field == Field::R && dst.field == Field::C) {
        // Real points of SU(n,n): entrywise imaginary part.
        double r = 0.0;
        for (int i = 0; i < sz; ++i)
            for (int j = 0; j < sz; ++j) r = std::max(r, std::abs(g.at(i, j).x));
        return r;
    }
    if (dst.field == Field::H) {
        Mat i_mat = Mat::zero(Field::H, sz, sz);
        for (int k = 0; k < sz; ++k) i_mat.at(k, k) = Quat(0, 1, 0, 0);
        double r = comm(i_mat);
        if (src.field == Field::R) {
            Mat j_mat = Mat::zero(Field::H, sz, sz);
            for (int k = 0; k < sz; ++k) j_mat.at(k, k) = Quat(0, 0, 1, 0);
            r = std::max(r, comm(j_mat));
        }
        return r;
    }
    if (src.field == Field::C && dst.field == Field::R) {
        Mat j = Mat::zero(Field::R, sz, sz);
        for (int b = 0; b < sz / 2; ++b) {
            j.at(2 * b, 2 * b + 1) = Quat(-1.0);
            j.at(2 * b + 1, 2 * b) = Quat(1.0);
        }
        return comm(j);
    }
    if (src.field == Field::H && dst.field == Field::R) {
        Mat ri = Mat::zero(Field::R, sz, sz), rj = Mat::zero(Field::R, sz, sz);
        for (int b = 0; b < sz / 4; ++b) {
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
        return std::max(comm(ri), comm(rj));
    }
    throw ShapeError("inclusion_residual: unsupported pair");
}

double totally_geodesic_check(const GroupId& src, const GroupId& dst, const Mat& z_src,
                              double total_time, double dt, const QuadratureSpec& spec) {
    double res = lie_residual(src, z_src);
    if (res > 1e-8) throw TangencyError(res);
    Mat z = embed(src, dst, z_src);
    QuadratureSpec qs = spec;
    InclusionSymmetry sym = inclusion_sample_symmetry(src, dst);
    for (auto& g : sym.generators) qs.orbit_generators.push_back(g);
    qs.conj_orbit = qs.conj_orbit || sym.needs_conj;
    GeodesicState st = make_state(dst, Mat::identity(dst.field, mat_size(dst)), z);
    Trajectory traj = integrate(st, total_time, dt, qs);
    double worst = 0.0;
    for (const auto& p : traj.points) worst = std::max(worst, inclusion_residual(src, dst, p.g));
    return worst;
}

std::vector<Mat> fixed_point_algebra(const GroupId& g) {
    if (g.kind != Kind::Split) throw ShapeError("fixed_point_algebra: split groups only");
    const int n = g.n;
    if (n < 2) throw ShapeError("fixed_point_algebra: needs n >= 2");
    std::vector<Mat> basis = lie_basis(g);
    const int d = static_cast<int>(basis.size());
    const int sz = 2 * n;
    const int comps = field_real_dim(g.field);
    RealMat constraints((n - 1) * sz * sz * comps, d);
    for (int i = 2; i <= n; ++i) {
        Mat a = plane_rotation_generator(g.field, n, i);
        Mat k = Mat::zero(g.field, sz, sz);
        set_block(k, 0, 0, a);
        set_block(k, n, n, a);
        const int row0 = (i - 2) * sz * sz * comps;
        for (int b = 0; b < d; ++b) {
            Mat c = matmul(basis[b], k) - matmul(k, basis[b]);
            int r = row0;
            for (int u = 0; u < sz; ++u)
                for (int v = 0; v < sz; ++v) {
                    const Quat& q = c.at(u, v);
                    constraints.at(r++, b) = q.w;
                    if (comps > 1) constraints.at(r++, b) = q.x;
                    if (comps > 2) {
                        constraints.at(r++, b) = q.y;
                        constraints.at(r++, b) = q.z;
                    }
                }
        }
    }
    auto null_vecs = nullspace(constraints, 1e-9);
    std::vector<Mat> out;
    for (const auto& vec : null_vecs) {
        Mat m = Mat::zero(g.field, sz, sz);
        for (int b = 0; b < d; ++b) {
            if (vec[b] == 0.0) continue;
            Mat t = basis[b];
            t *= vec[b];
            m += t;
        }
        out.push_back(std::move(m));
    }
    return out;
}

double max_deviation_from_exponential(const Trajectory& traj, const Mat& z, const Mat& g0) {
    double worst = 0.0;
    for (const auto& p : traj.points) {
        Mat ref = matmul(mexp(z, p.t), g0);
        worst = std::max(worst, frob_norm(p.g - ref));
    }
    return worst;
}

}  // namespace mobius
