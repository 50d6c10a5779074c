#include "mobius/lowdim.hpp"

#include <cmath>

#include "mobius/errors.hpp"

namespace mobius {

namespace {
using cd = std::complex<double>;
}

SplitQuat SplitQuat::from_pair(cd alpha, cd beta) {
    // alpha + j beta with j(x + iy) = x j - y k.
    return {alpha.real(), alpha.imag(), beta.real(), -beta.imag()};
}

SplitQuat smul(const SplitQuat& p, const SplitQuat& q) {
    // -i^2 = j^2 = k^2 = 1, ij = -ji = k, jk = -kj = -i, ki = -ik = j.
    return {p.a * q.a - p.b * q.b + p.c * q.c + p.d * q.d,
            p.a * q.b + p.b * q.a - p.c * q.d + p.d * q.c,
            p.a * q.c + p.c * q.a - p.b * q.d + p.d * q.b,
            p.a * q.d + p.d * q.a + p.b * q.c - p.c * q.b};
}

SplitQuat sconj(const SplitQuat& p) { return {p.a, -p.b, -p.c, -p.d}; }
double snormsq(const SplitQuat& p) { return p.a * p.a + p.b * p.b - p.c * p.c - p.d * p.d; }
SplitQuat sadd(const SplitQuat& p, const SplitQuat& q) {
    return {p.a + q.a, p.b + q.b, p.c + q.c, p.d + q.d};
}
SplitQuat sneg(const SplitQuat& p) { return {-p.a, -p.b, -p.c, -p.d}; }

Mat to_mat2(const SplitQuat& p) {
    Mat m(Field::R, 2, 2);
    m.at(0, 0) = Quat(p.a + p.d);
    m.at(0, 1) = Quat(p.b + p.c);
    m.at(1, 0) = Quat(-p.b + p.c);
    m.at(1, 1) = Quat(p.a - p.d);
    return m;
}

SplitQuat from_mat2(const Mat& m) {
    return {0.5 * (m.at(0, 0).w + m.at(1, 1).w), 0.5 * (m.at(0, 1).w - m.at(1, 0).w),
            0.5 * (m.at(0, 1).w + m.at(1, 0).w), 0.5 * (m.at(0, 0).w - m.at(1, 1).w)};
}

SplitQuat random_sl2(Rng& rng, double radius) {
    Mat x(Field::R, 2, 2);
    double a = radius * rng.normal(), b = radius * rng.normal(), c = radius * rng.normal();
    x.at(0, 0) = Quat(a);
    x.at(1, 1) = Quat(-a);
    x.at(0, 1) = Quat(b);
    x.at(1, 0) = Quat(c);
    return from_mat2(mexp(x));
}

namespace {
// Coordinates in the ordered basis {1, i, j, -k}.
void coords_o22(const SplitQuat& s, double out[4]) {
    out[0] = s.a;
    out[1] = s.b;
    out[2] = s.c;
    out[3] = -s.d;
}
}  // namespace

Mat o22_operator(const SplitQuat& p, const SplitQuat& q) {
    const SplitQuat qbar = sconj(q);
    const SplitQuat basis[4] = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, -1}};
    Mat m(Field::R, 4, 4);
    for (int col = 0; col < 4; ++col) {
        SplitQuat img = smul(smul(p, basis[col]), qbar);
        double v[4];
        coords_o22(img, v);
        for (int row = 0; row < 4; ++row) m.at(row, col) = Quat(v[row]);
    }
    return m;
}

CircleImage o22_act(const SplitQuat& p, const SplitQuat& q, cd u) {
    Mat op = o22_operator(p, q);
    auto apply = [&](cd z) {
        // Element u z + j z of M, in {1, i, j, -k} coordinates.
        cd uz = u * z;
        double v[4] = {uz.real(), uz.imag(), z.real(), z.imag()};
        double w[4] = {0, 0, 0, 0};
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) w[r] += op.at(r, c).w * v[c];
        cd top(w[0], w[1]), bot(w[2], w[3]);
        return std::make_pair(top, bot);
    };
    auto [t1, b1] = apply(cd(1, 0));
    auto [t2, b2] = apply(cd(0, 1));
    cd u1 = t1 / b1;
    cd u2 = t2 / b2;
    double consistency = std::abs(u1 - u2) + std::abs(std::abs(u1) - 1.0);
    return {u1, consistency};
}

cd o22_direct(const SplitQuat& p, cd u) {
    cd alpha(p.a, p.b), beta(p.c, -p.d);  // p = alpha + j beta
    return (alpha * u + std::conj(beta)) / (beta * u + std::conj(alpha));
}

std::vector<double> conformal_act(const Mat& a, const std::vector<double>& z) {
    const int m1 = static_cast<int>(z.size());  // m + 1 spatial coordinates
    if (a.rows() != m1 + 1 || a.cols() != m1 + 1) throw ShapeError("conformal_act: size mismatch");
    std::vector<double> w(m1 + 1, 0.0);
    for (int r = 0; r < m1 + 1; ++r) {
        double s = a.at(r, 0).w;
        for (int c = 0; c < m1; ++c) s += a.at(r, c + 1).w * z[c];
        w[r] = s;
    }
    if (std::abs(w[0]) < 1e-12)
        throw InternalInvariantError("conformal_act: vanishing time component");
    std::vector<double> out(m1);
    for (int c = 0; c < m1; ++c) out[c] = w[c + 1] / w[0];
    return out;
}

std::vector<double> projective_act(const Mat& a, const std::vector<double>& z) {
    const int n = static_cast<int>(z.size());
    if (a.rows() != n || a.cols() != n) throw ShapeError("projective_act: size mismatch");
    std::vector<double> w(n, 0.0);
    double nrm = 0.0;
    for (int r = 0; r < n; ++r) {
        double s = 0.0;
        for (int c = 0; c < n; ++c) s += a.at(r, c).w * z[c];
        w[r] = s;
        nrm += s * s;
    }
    nrm = std::sqrt(nrm);
    for (double& x : w) x /= nrm;
    return w;
}

double lorentz_residual(const Mat& a, int k) {
    if (a.rows() != k + 1 || a.cols() != k + 1) throw ShapeError("lorentz_residual: size mismatch");
    Mat eta = Mat::zero(Field::R, k + 1, k + 1);
    eta.at(0, 0) = Quat(1.0);
    for (int i = 1; i <= k; ++i) eta.at(i, i) = Quat(-1.0);
    double res = max_abs(matmul(transpose(a), matmul(eta, a)) - eta);
    res = std::max(res, std::abs(det(a).v.w - 1.0));
    if (a.at(0, 0).w < 1.0 - 1e-9) res = std::max(res, 1.0);
    return res;
}

Mat mat4_left(const Quat& q) {
    Mat m(Field::R, 4, 4);
    const double L[4][4] = {{q.w, -q.x, -q.y, -q.z},
                            {q.x, q.w, -q.z, q.y},
                            {q.y, q.z, q.w, -q.x},
                            {q.z, -q.y, q.x, q.w}};
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) m.at(r, c) = Quat(L[r][c]);
    return m;
}

Mat mat4_right(const Quat& q) {
    Mat m(Field::R, 4, 4);
    const double R[4][4] = {{q.w, -q.x, -q.y, -q.z},
                            {q.x, q.w, q.z, -q.y},
                            {q.y, -q.z, q.w, q.x},
                            {q.z, q.y, -q.x, q.w}};
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) m.at(r, c) = Quat(R[r][c]);
    return m;
}

Mat sp11_algebra_map(const Mat& x) {
    GroupId sp11 = split_group(Field::H, 1);
    double res = lie_residual(sp11, x);
    if (res > 1e-8) throw TangencyError(res);
    const Quat xi = x.at(0, 0), eta = x.at(1, 1), alpha = x.at(1, 0);
    Mat f = Mat::zero(Field::R, 5, 5);
    const double av[4] = {alpha.w, alpha.x, alpha.y, alpha.z};
    for (int i = 0; i < 4; ++i) {
        f.at(0, 1 + i) = Quat(2.0 * av[i]);
        f.at(1 + i, 0) = Quat(2.0 * av[i]);
    }
    Mat s = mat4_left(eta) - mat4_right(xi);
    set_block(f, 1, 1, s);
    return f;
}

Mat sp11_morphism(const Mat& g) {
    GroupId sp11 = split_group(Field::H, 1);
    double res = is_member(sp11, g);
    if (res > 1e-8) throw MembershipError("sp11_morphism: not in Sp(1,1)", res);

    // Polar part: h^2 = conj(g)^T g, Hermitian positive definite with the
    // quadratic relation h^2 squared = tau h^2 - Delta I.
    Mat h2 = matmul(conj_transpose(g), g);
    const double al = h2.at(0, 0).w, ga = h2.at(1, 1).w;
    const Quat beta = h2.at(0, 1);
    const double delta = al * ga - qnormsq(beta);
    const double sq = std::sqrt(std::max(delta, 0.0));
    const double denom = std::sqrt(al + ga + 2.0 * sq);
    Mat h = h2;
    h.at(0, 0) += Quat(sq);
    h.at(1, 1) += Quat(sq);
    h *= 1.0 / denom;

    Mat u = matmul(g, inverse(h));
    const Quat p = u.at(0, 0), qhat = u.at(1, 1);

    // h = exp((0 c; conj(c) 0)) with h11 = cosh|c|.
    const double ch = h.at(0, 0).w;
    const double s = std::acosh(std::max(1.0, ch));
    Quat c;
    if (s > 1e-14) {
        double scale = s / std::sinh(s);
        c = scale * h.at(0, 1);
    }
    // f of the boost part: alpha = conj(c).
    const Quat alpha = qconj(c);
    const double m = 2.0 * qnorm(alpha);
    Mat b = Mat::zero(Field::R, 5, 5);
    const double av[4] = {alpha.w, alpha.x, alpha.y, alpha.z};
    for (int i = 0; i < 4; ++i) {
        b.at(0, 1 + i) = Quat(2.0 * av[i]);
        b.at(1 + i, 0) = Quat(2.0 * av[i]);
    }
    Mat eb = Mat::identity(Field::R, 5);
    if (m > 1e-14) {
        Mat b2 = matmul(b, b);
        Mat t1 = b;
        t1 *= std::sinh(m) / m;
        Mat t2 = b2;
        t2 *= (std::cosh(m) - 1.0) / (m * m);
        eb += t1;
        eb += t2;
    }
    Mat fu = Mat::identity(Field::R, 5);
    set_block(fu, 1, 1, matmul(mat4_left(qhat), mat4_right(qconj(p))));
    return matmul(fu, eb);
}

Mat sl4_morphism(const Mat& a) {
    if (a.field() != Field::R || a.rows() != 4 || a.cols() != 4)
        throw ShapeError("sl4_morphism: need a real 4x4 matrix");
    double dres = std::abs(det(a).v.w - 1.0);
    if (dres > 1e-8) throw MembershipError("sl4_morphism: det != 1", dres);
    const Quat units[3] = {Quat(0, 1, 0, 0), Quat(0, 0, 1, 0), Quat(0, 0, 0, 1)};
    Mat basis[6];
    for (int i = 0; i < 3; ++i) {
        basis[i] = mat4_left(units[i]);
        basis[3 + i] = mat4_right(units[i]);
    }
    Mat f(Field::R, 6, 6);
    Mat at = transpose(a);
    for (int col = 0; col < 6; ++col) {
        Mat w = matmul(a, matmul(basis[col], at));
        for (int row = 0; row < 6; ++row) f.at(row, col) = Quat(0.25 * frob_inner(w, basis[row]));
    }
    return f;
}

Mat rotation_matrix_Iw(const Quat& w) {
    const double a = w.w, b = w.x, c = w.y, d = w.z;
    const double n2 = qnormsq(w);
    if (n2 == 0.0) throw ShapeError("rotation_matrix_Iw: w must be nonzero");
    Mat m(Field::R, 3, 3);
    const double e[3][3] = {
        {a * a + b * b - d * d - c * c, -2 * a * d + 2 * b * c, 2 * b * d + 2 * a * c},
        {2 * a * d + 2 * b * c, a * a - b * b + c * c - d * d, -2 * a * b + 2 * c * d},
        {-2 * a * c + 2 * b * d, 2 * a * b + 2 * c * d, a * a - b * b + d * d - c * c}};
    for (int r = 0; r < 3; ++r)
        for (int col = 0; col < 3; ++col) m.at(r, col) = Quat(e[r][col] / n2);
    return m;
}

Mat rotation_matrix_Iw_direct(const Quat& w) {
    const Quat winv = qinv(w);
    const Quat units[3] = {Quat(0, 1, 0, 0), Quat(0, 0, 1, 0), Quat(0, 0, 0, 1)};
    Mat m(Field::R, 3, 3);
    for (int col = 0; col < 3; ++col) {
        Quat img = qmul(qmul(w, units[col]), winv);
        m.at(0, col) = Quat(img.x);
        m.at(1, col) = Quat(img.y);
        m.at(2, col) = Quat(img.z);
    }
    return m;
}

DiagramReport diagram_check(Diagram which, long samples, uint64_t seed) {
    Rng rng(seed);
    DiagramReport rep;
    rep.which = which;
    rep.samples = samples;
    auto rand_unit_quat = [&]() {
        Quat q(rng.normal(), rng.normal(), rng.normal(), rng.normal());
        return (1.0 / qnorm(q)) * q;
    };
    switch (which) {
        case Diagram::O22: {
            for (long it = 0; it < samples; ++it) {
                SplitQuat p = random_sl2(rng);
                SplitQuat q = random_sl2(rng);
                double phi = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
                cd u(std::cos(phi), std::sin(phi));
                CircleImage full = o22_act(p, q, u);
                cd direct = o22_direct(p, u);
                rep.max_residual =
                    std::max(rep.max_residual, std::abs(full.u - direct) + full.consistency);
                CircleImage right_only = o22_act(SplitQuat{1, 0, 0, 0}, q, u);
                rep.aux_residual = std::max(rep.aux_residual, std::abs(right_only.u - u));
            }
            rep.pass = rep.max_residual < 1e-8 && rep.aux_residual < 1e-10;
            return rep;
        }
        case Diagram::Sp11: {
            GroupId sp11 = split_group(Field::H, 1);
            for (long it = 0; it < samples; ++it) {
                Mat g = matmul(mexp(random_algebra(sp11, rng, 0.7)),
                               mexp(random_algebra(sp11, rng, 0.7)));
                Quat u = rand_unit_quat();
                Mat fg = sp11_morphism(g);
                Quat ubar = qconj(u);
                std::vector<double> z{ubar.w, ubar.x, ubar.y, ubar.z};
                std::vector<double> path1 = conformal_act(fg, z);
                Mat upt(Field::H, 1, 1);
                upt.at(0, 0) = u;
                MobiusElement ge(sp11, g, false);
                Mat moved = act(ge, upt);
                Quat mbar = qconj(moved.at(0, 0));
                double r = 0.0;
                r = std::max(r, std::abs(path1[0] - mbar.w));
                r = std::max(r, std::abs(path1[1] - mbar.x));
                r = std::max(r, std::abs(path1[2] - mbar.y));
                r = std::max(r, std::abs(path1[3] - mbar.z));
                rep.max_residual = std::max(rep.max_residual, r);
            }
            rep.pass = rep.max_residual < 1e-8;
            return rep;
        }
        case Diagram::SL4: {
            GroupId o33 = split_group(Field::R, 3);
            for (long it = 0; it < samples; ++it) {
                Mat m(Field::R, 4, 4);
                double tr = 0.0;
                for (int r = 0; r < 4; ++r)
                    for (int c = 0; c < 4; ++c) m.at(r, c) = Quat(0.5 * rng.normal());
                for (int r = 0; r < 4; ++r) tr += m.at(r, r).w;
                for (int r = 0; r < 4; ++r) m.at(r, r) -= Quat(tr / 4.0);
                Mat a = mexp(m);  // det = 1 exactly
                Quat u = rand_unit_quat();
                Mat fa = sl4_morphism(a);
                MobiusElement fe(o33, fa, false);
                Mat path1 = act(fe, rotation_matrix_Iw(u));
                std::vector<double> z{u.w, u.x, u.y, u.z};
                std::vector<double> au = projective_act(a, z);
                Mat path2 = rotation_matrix_Iw(Quat(au[0], au[1], au[2], au[3]));
                rep.max_residual = std::max(rep.max_residual, max_abs(path1 - path2));
            }
            rep.pass = rep.max_residual < 1e-8;
            return rep;
        }
    }
    return rep;
}

namespace {
Mat so3_generator(const Quat& xi) {
    // Matrix of v -> xi v - v xi on Im(H) in basis {i, j, k}.
    Mat m = Mat::zero(Field::R, 3, 3);
    m.at(0, 1) = Quat(-2.0 * xi.z);
    m.at(0, 2) = Quat(2.0 * xi.y);
    m.at(1, 0) = Quat(2.0 * xi.z);
    m.at(1, 2) = Quat(-2.0 * xi.x);
    m.at(2, 0) = Quat(-2.0 * xi.y);
    m.at(2, 1) = Quat(2.0 * xi.x);
    return m;
}
}  // namespace

double corollary7_defect_sp11(const Quat& xi, const Quat& eta, double total_time, double dt,
                              const QuadratureSpec& spec) {
    GroupId sp11 = split_group(Field::H, 1);
    Mat z = Mat::zero(Field::H, 2, 2);
    z.at(0, 0) = xi;
    z.at(1, 1) = eta;
    double nrm = frob_norm(z);
    if (nrm == 0.0) return 0.0;
    z *= 1.0 / nrm;
    QuadratureSpec qs = spec;
    for (auto& g : unit_translation_symmetry(compact_group(Field::H, 1)))
        qs.orbit_generators.push_back(g);
    GeodesicState st = make_state(sp11, Mat::identity(Field::H, 2), z);
    Trajectory traj = integrate(st, total_time, dt, qs);
    return max_deviation_from_exponential(traj, z, Mat::identity(Field::H, 2));
}

double corollary7_defect_o33(const Quat& xi, const Quat& eta, double total_time, double dt,
                             const QuadratureSpec& spec) {
    GroupId o33 = split_group(Field::R, 3);
    Mat z = Mat::zero(Field::R, 6, 6);
    set_block(z, 0, 0, so3_generator(xi));
    set_block(z, 3, 3, so3_generator(eta));
    double nrm = frob_norm(z);
    if (nrm == 0.0) return 0.0;
    z *= 1.0 / nrm;
    GeodesicState st = make_state(o33, Mat::identity(Field::R, 6), z);
    Trajectory traj = integrate(st, total_time, dt, spec);
    return max_deviation_from_exponential(traj, z, Mat::identity(Field::R, 6));
}

}  // namespace mobius
