#include "mobius/action.hpp"

#include <cmath>

#include "mobius/errors.hpp"

namespace mobius {

MobiusElement::MobiusElement(const GroupId& g, Mat full, bool validate) : group(g), m(std::move(full)) {
    if (g.kind != Kind::Split) throw ShapeError("MobiusElement: group must be split");
    if (validate) {
        double res = is_member(g, m);
        if (res > 1e-9) throw MembershipError("matrix is not in " + group_name(g), res);
    }
}

MobiusElement MobiusElement::identity(const GroupId& g) {
    return MobiusElement(g, Mat::identity(g.field, 2 * g.n), false);
}

Mat act(const MobiusElement& g, const Mat& u) {
    const int n = g.n();
    if (u.rows() != n || u.cols() != n) throw ShapeError("act: point has wrong size");
    double res = is_member(compact_of(g.group), u);
    if (res > 1e-6) throw MembershipError("act: point is not in " + group_name(compact_of(g.group)), res);
    Mat num = matmul(g.blockA(), u) + g.blockB();
    Mat den = matmul(g.blockC(), u) + g.blockD();
    try {
        return matmul(num, inverse(den));
    } catch (const SingularMatrixError& e) {
        // CU + D is invertible for any g in G, U in M; reaching this means the
        // inputs were corrupted.
        throw InternalInvariantError("act: CU+D singular (pivot " + std::to_string(e.pivot) + ")");
    }
}

namespace {
Mat default_twist(Field f, int n) {
    // Fixed, well-conditioned, deliberately non-identity basis change of the
    // graph subspace; keeps act_on_graph an honestly different code path.
    Mat s = Mat::identity(f, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            int d = i - j;
            if (d < 0) d = -d;
            if (d > 0) s.at(i, j) += Quat(std::pow(0.3, d));
        }
    return s;
}
}  // namespace

Mat act_on_graph(const MobiusElement& g, const Mat& u) {
    return act_on_graph(g, u, default_twist(u.field(), u.rows()));
}

Mat act_on_graph(const MobiusElement& g, const Mat& u, const Mat& basis_twist) {
    const int n = g.n();
    Mat basis = matmul(vstack(u, Mat::identity(u.field(), n)), basis_twist);
    Mat image = matmul(g.m, basis);
    Mat top = block(image, 0, 0, n, n);
    Mat bot = block(image, n, 0, n, n);
    return matmul(top, inverse(bot));
}

Mat algebra_field(const GroupId& g, const Mat& z, const Mat& p) {
    const int n = g.n;
    // W = (Z11 - p Z21) p + (Z12 - p Z22)
    Mat z_top = block(z, 0, 0, n, 2 * n);
    Mat z_bot = block(z, n, 0, n, 2 * n);
    Mat pz = matmul(p, z_bot);                 // n x 2n
    Mat lhs = block(z_top - pz, 0, 0, n, n);   // Z11 - p Z21
    Mat rhs = block(z_top - pz, 0, n, n, n);   // Z12 - p Z22
    return matmul(lhs, p) + rhs;
}

Mat induced_field(const MobiusElement& g, const Mat& x, const Mat& q) {
    Mat z = matmul(x, inverse(g.m));
    double res = lie_residual(g.group, z);
    if (res > 1e-8) throw TangencyError(res);
    double mres = is_member(compact_of(g.group), q);
    if (mres > 1e-6)
        throw MembershipError("induced_field: base point not in " + group_name(compact_of(g.group)),
                              mres);
    Mat p = act(g, q);
    return algebra_field(g.group, z, p);
}

Mat boost_gamma(const GroupId& g, double t) {
    const int n = g.n;
    Mat m = Mat::zero(g.field, 2 * n, 2 * n);
    double c = std::cosh(t), s = std::sinh(t);
    for (int i = 0; i < n; ++i) {
        m.at(i, i) = Quat(c);
        m.at(n + i, n + i) = Quat(c);
        m.at(i, n + i) = Quat(s);
        m.at(n + i, i) = Quat(s);
    }
    return m;
}

Mat boost_sigma(const GroupId& g, double s) {
    const int n = g.n;
    double f = 1.0 / std::sqrt(1.0 - s * s);
    Mat m = Mat::zero(g.field, 2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        m.at(i, i) = Quat(f);
        m.at(n + i, n + i) = Quat(f);
        m.at(i, n + i) = Quat(f * s);
        m.at(n + i, i) = Quat(f * s);
    }
    return m;
}

Mat boost_sigma_velocity(const GroupId& g, double s) {
    const int n = g.n;
    double w = 1.0 - s * s;
    double f1 = s * std::pow(w, -1.5);  // d/ds (1-s^2)^{-1/2}
    double f0 = 1.0 / std::sqrt(w);
    Mat m = Mat::zero(g.field, 2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        m.at(i, i) = Quat(f1);
        m.at(n + i, n + i) = Quat(f1);
        m.at(i, n + i) = Quat(f1 * s + f0);
        m.at(n + i, i) = Quat(f1 * s + f0);
    }
    return m;
}

double eig_margin(const Mat& q, double eps) {
    Mat shifted = q;
    if (q.field() == Field::H) {
        Mat c = complexify(q);
        for (int i = 0; i < c.rows(); ++i) c.at(i, i) += Quat(eps);
        return qnorm(det(c).v);
    }
    for (int i = 0; i < q.rows(); ++i) shifted.at(i, i) += Quat(eps);
    return qnorm(det(shifted).v);
}

}  // namespace mobius
