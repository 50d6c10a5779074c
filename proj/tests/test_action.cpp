#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mobius/action.hpp"

using namespace mobius;

namespace {

std::vector<GroupId> small_groups() {
    return {split_group(Field::R, 3), split_group(Field::C, 1), split_group(Field::C, 2),
            split_group(Field::H, 1)};
}

}  // namespace

TEST_CASE("identity and block-diagonal actions") {
    Rng rng(21);
    for (const GroupId& g : small_groups()) {
        GroupId m = compact_of(g);
        MobiusElement e = MobiusElement::identity(g);
        Mat u = haar_sample(m, rng);
        CHECK(max_abs(act(e, u) - u) < 1e-14);

        // diag(A, D) * U = A U D^{-1}
        Mat a = haar_sample(m, rng), d = haar_sample(m, rng);
        Mat k = Mat::zero(g.field, 2 * g.n, 2 * g.n);
        set_block(k, 0, 0, a);
        set_block(k, g.n, g.n, d);
        if (g.field == Field::C && g.det_one) {
            // S(U x U): fix the determinant by a phase on the last column of d.
            Quat det_fix = qconj(qmul(det(a).v, det(d).v));
            for (int i = 0; i < g.n; ++i) d.at(i, g.n - 1) = qmul(d.at(i, g.n - 1), det_fix);
            k = Mat::zero(g.field, 2 * g.n, 2 * g.n);
            set_block(k, 0, 0, a);
            set_block(k, g.n, g.n, d);
        }
        MobiusElement ke(g, k);
        CHECK(max_abs(act(ke, u) - matmul(a, matmul(u, inverse(d)))) < 1e-12);
    }
}

TEST_CASE("boost acts as the tanh Mobius map") {
    Rng rng(22);
    for (const GroupId& g : small_groups()) {
        GroupId m = compact_of(g);
        Mat q = haar_sample(m, rng);
        double t = 0.9;
        MobiusElement gt(g, boost_gamma(g, t), false);
        Mat lhs = act(gt, q);
        double th = std::tanh(t);
        Mat num = q;
        Mat den = q;
        den *= th;
        for (int i = 0; i < g.n; ++i) {
            num.at(i, i) += Quat(th);
            den.at(i, i) += Quat(1.0);
        }
        CHECK(max_abs(lhs - matmul(num, inverse(den))) < 1e-12);
    }
}

TEST_CASE("action law act(gh, u) = act(g, act(h, u))") {
    Rng rng(23);
    for (const GroupId& g : small_groups()) {
        GroupId m = compact_of(g);
        double worst = 0;
        for (int it = 0; it < 50; ++it) {
            Mat a = random_element(g, rng, 0.8), b = random_element(g, rng, 0.8);
            Mat u = haar_sample(m, rng);
            MobiusElement ga(g, a, false), gb(g, b, false);
            MobiusElement gab(g, matmul(a, b), false);
            worst = std::max(worst, max_abs(act(gab, u) - act(ga, act(gb, u))));
        }
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("action lands in M") {
    Rng rng(24);
    for (const GroupId& g : small_groups()) {
        GroupId m = compact_of(g);
        for (int it = 0; it < 20; ++it) {
            Mat u = haar_sample(m, rng);
            Mat gm = random_element(g, rng, 1.0);
            CHECK(is_member(m, act(MobiusElement(g, gm, false), u)) < 1e-8);
        }
    }
}

TEST_CASE("graph picture agrees with the Mobius formula") {
    Rng rng(25);
    for (const GroupId& g : small_groups()) {
        GroupId m = compact_of(g);
        double worst = 0;
        for (int it = 0; it < 100; ++it) {
            Mat gm = random_element(g, rng, 0.8);
            Mat u = haar_sample(m, rng);
            MobiusElement ge(g, gm, false);
            worst = std::max(worst, max_abs(act(ge, u) - act_on_graph(ge, u)));
        }
        CHECK(worst < 1e-9);
    }
}

TEST_CASE("induced field worked values") {
    GroupId su11 = split_group(Field::C, 1);
    MobiusElement e = MobiusElement::identity(su11);
    // g = I, X = 0 -> 0
    Mat zero = Mat::zero(Field::C, 2, 2);
    Mat q(Field::C, 1, 1);
    q.at(0, 0) = Quat(std::cos(0.7), std::sin(0.7));
    CHECK(max_abs(induced_field(e, zero, q)) == 0.0);
    // X = (0 1; 1 0) at I on U_1: field is 1 - e^{2 i theta}
    Mat x = Mat::zero(Field::C, 2, 2);
    x.at(0, 1) = Quat(1);
    x.at(1, 0) = Quat(1);
    Mat w = induced_field(e, x, q);
    Quat expect = Quat(1) - qmul(q.at(0, 0), q.at(0, 0));
    CHECK(qnorm(w.at(0, 0) - expect) < 1e-14);
}

TEST_CASE("induced field of diag(X,0) is X q") {
    Rng rng(26);
    for (const GroupId& g : small_groups()) {
        if (g.field == Field::C && g.det_one && g.n == 1) continue;  // no traceless X
        GroupId m = compact_of(g);
        Mat x = random_algebra(m, rng, 1.0);
        if (g.field == Field::C) {
            Quat tr;
            for (int i = 0; i < m.n; ++i) tr += x.at(i, i);
            for (int i = 0; i < m.n; ++i) x.at(i, i) -= (1.0 / m.n) * tr;
        }
        Mat z = Mat::zero(g.field, 2 * g.n, 2 * g.n);
        set_block(z, 0, 0, x);
        Mat q = haar_sample(m, rng);
        Mat w = induced_field(MobiusElement::identity(g), z, q);
        CHECK(max_abs(w - matmul(x, q)) < 1e-13);
    }
}

TEST_CASE("induced field matches central differences of act") {
    Rng rng(27);
    for (const GroupId& g : small_groups()) {
        GroupId m = compact_of(g);
        for (int it = 0; it < 10; ++it) {
            Mat gm = random_element(g, rng, 0.7);
            Mat z = random_algebra(g, rng, 1.0);
            Mat q = haar_sample(m, rng);
            MobiusElement ge(g, gm, false);
            Mat x = matmul(z, gm);
            Mat w = induced_field(ge, x, q);
            const double h = 1e-5;
            MobiusElement gp(g, matmul(mexp(z, h), gm), false);
            MobiusElement gmn(g, matmul(mexp(z, -h), gm), false);
            Mat fd = act(gp, q) - act(gmn, q);
            fd *= 1.0 / (2 * h);
            CHECK(max_abs(w - fd) < 1e-6);
        }
    }
}

TEST_CASE("induced field is tangent to M at g*q") {
    Rng rng(28);
    for (const GroupId& g : small_groups()) {
        GroupId m = compact_of(g);
        for (int it = 0; it < 10; ++it) {
            Mat gm = random_element(g, rng, 0.7);
            Mat z = random_algebra(g, rng, 1.0);
            Mat q = haar_sample(m, rng);
            MobiusElement ge(g, gm, false);
            Mat w = induced_field(ge, matmul(z, gm), q);
            Mat p = act(ge, q);
            // conj(p)^T w must be skew-Hermitian.
            Mat s = matmul(conj_transpose(p), w);
            CHECK(max_abs(s + conj_transpose(s)) < 1e-8);
        }
    }
}

TEST_CASE("class-function equivariance of the boost family") {
    Rng rng(29);
    for (const GroupId& g : small_groups()) {
        GroupId m = compact_of(g);
        double worst = 0;
        for (int it = 0; it < 20; ++it) {
            Mat b = haar_sample(m, rng);
            Mat q = haar_sample(m, rng);
            double s = rng.uniform(-0.9, 0.9);
            MobiusElement se(g, boost_sigma(g, s), false);
            Mat lhs = act(se, matmul(b, matmul(q, inverse(b))));
            Mat rhs = matmul(b, matmul(act(se, q), inverse(b)));
            worst = std::max(worst, max_abs(lhs - rhs));
        }
        CHECK(worst < 1e-9);
    }
}

TEST_CASE("restriction to K is isometric on M (finite differences)") {
    Rng rng(30);
    GroupId g = split_group(Field::C, 2);
    GroupId m = compact_of(g);
    for (int it = 0; it < 10; ++it) {
        Mat a = haar_sample(m, rng), d = haar_sample(m, rng);
        Mat q = haar_sample(m, rng);
        Mat v = random_algebra(m, rng, 1.0);  // tangent direction at q: v q
        const double h = 1e-6;
        // |d/ds act(k, e^{sv} q)|_0 vs |v q|
        Mat k = Mat::zero(g.field, 4, 4);
        set_block(k, 0, 0, a);
        set_block(k, 2, 2, d);
        MobiusElement ke(g, k, false);
        Mat fd = act(ke, matmul(mexp(v, h), q)) - act(ke, matmul(mexp(v, -h), q));
        fd *= 1.0 / (2 * h);
        double lhs = frob_norm(fd);
        double rhs = frob_norm(matmul(v, q));
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-6));
    }
}

TEST_CASE("mass concentration under the boost flow on U2") {
    Rng rng(31);
    GroupId g = split_group(Field::C, 2);
    GroupId m = compact_of(g);
    const Mat eye = Mat::identity(Field::C, 2);
    int kept = 0;
    for (int it = 0; it < 20; ++it) {
        Mat q = haar_sample(m, rng);
        if (eig_margin(q, 1.0) <= 1e-3) continue;
        ++kept;
        double prev = 1e300;
        for (double t : {2.0, 3.0, 4.0, 5.0, 6.0}) {
            MobiusElement gt(g, boost_gamma(g, t), false);
            double dev = frob_norm(act(gt, q) - eye);
            CHECK(dev < prev + 1e-12);  // monotone approach
            prev = dev;
        }
        CHECK(prev < 0.01);  // endpoint, t = 6
    }
    CHECK(kept > 10);
}

TEST_CASE("preconditions raise typed errors") {
    GroupId g = split_group(Field::C, 1);
    MobiusElement e = MobiusElement::identity(g);
    Mat bad(Field::C, 1, 1);
    bad.at(0, 0) = Quat(2.0);  // not unitary
    CHECK_THROWS_AS(act(e, bad), MembershipError);
    Mat not_tangent = Mat::identity(Field::C, 2);  // I is not in su(1,1)
    Mat q(Field::C, 1, 1);
    q.at(0, 0) = Quat(1);
    CHECK_THROWS_AS(induced_field(e, not_tangent, q), TangencyError);
    Mat flip = Mat::zero(Field::C, 2, 2);
    flip.at(0, 1) = Quat(1);
    flip.at(1, 0) = Quat(1);
    CHECK_THROWS_AS(MobiusElement(g, flip), MembershipError);  // swaps the form sign
}
