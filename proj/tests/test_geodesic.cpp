#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mobius/geodesic.hpp"

using namespace mobius;

namespace {
constexpr double kPi = std::numbers::pi;

Mat boost_e(const GroupId& g) {
    Mat e = Mat::zero(g.field, 2 * g.n, 2 * g.n);
    for (int i = 0; i < g.n; ++i) {
        e.at(i, g.n + i) = Quat(1);
        e.at(g.n + i, i) = Quat(1);
    }
    return e;
}

// Sub-chart of SU(1,1) along the boost line, with exact torus quadrature
// (U_1 is abelian, so every integrand is a class function).
Chart boost_chart() {
    GroupId g = split_group(Field::C, 1);
    Mat e = boost_e(g);
    e *= 1.0 / std::sqrt(2.0);
    return make_chart(g, Mat::identity(Field::C, 2), {e});
}

QuadratureSpec torus_spec(int grid) {
    QuadratureSpec s;
    s.mode = QuadMode::WeylTorus;
    s.grid = grid;
    return s;
}

double norm2v(std::span<const double> v) {
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

TEST_CASE("chart basics") {
    GroupId g = split_group(Field::C, 1);
    Chart c = make_chart(g, Mat::identity(Field::C, 2));
    std::vector<double> zero(c.basis.size(), 0.0);
    CHECK(max_abs(chart_point(c, zero) - Mat::identity(Field::C, 2)) == 0);
    auto frame = chart_frame(c, zero);
    for (size_t i = 0; i < frame.size(); ++i) CHECK(max_abs(frame[i] - c.basis[i]) == 0);
    // dexp corrects the frame away from 0: compare against finite differences
    // of the chart map.
    std::vector<double> x{0.2, -0.1, 0.15};
    auto fr = chart_frame(c, x);
    const double h = 1e-6;
    for (size_t i = 0; i < fr.size(); ++i) {
        std::vector<double> xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        Mat fd = chart_point(c, xp) - chart_point(c, xm);
        fd *= 1.0 / (2 * h);
        Mat analytic = matmul(fr[i], chart_point(c, x));
        CHECK(max_abs(fd - analytic) < 1e-9);
    }
}

TEST_CASE("one-dimensional boost chart: metric and Christoffel closed forms") {
    Chart c = boost_chart();
    SampleSet samples = build_samples(compact_of(c.g), torus_spec(2048));
    for (double x : {0.0, 0.1, 0.3, -0.25}) {
        double u = x / std::sqrt(2.0);
        std::vector<double> xs{x};
        RealMat gm = chart_metric(c, xs, samples);
        double want = 2 * kPi / (std::cosh(u) * std::cosh(u));
        CHECK(gm.at(0, 0) == doctest::Approx(want).epsilon(1e-10));
        auto gamma = christoffel(c, xs, samples, 1e-3);
        double want_gamma = -std::tanh(u) / std::sqrt(2.0);
        CHECK(gamma[0] == doctest::Approx(want_gamma).epsilon(2e-5));
        // Richardson consistency between h and h/2.
        auto gamma2 = christoffel(c, xs, samples, 5e-4);
        CHECK(std::abs(gamma2[0] - want_gamma) <= std::abs(gamma[0] - want_gamma) + 1e-9);
    }
}

TEST_CASE("zero velocity gives a constant trajectory") {
    GroupId g = split_group(Field::C, 1);
    GeodesicState st = make_state(g, Mat::identity(Field::C, 2), Mat::zero(Field::C, 2, 2));
    Trajectory traj = integrate(st, 0.2, 0.02, torus_spec(256));
    CHECK(traj.completed);
    for (const auto& p : traj.points) CHECK(max_abs(p.g - Mat::identity(Field::C, 2)) < 1e-12);
}

TEST_CASE("rigid one-factor curve is a geodesic (Sp(1,1) quick case)") {
    GroupId g = split_group(Field::H, 1);
    Mat z = Mat::zero(Field::H, 2, 2);
    z.at(0, 0) = Quat(0, 1, 0, 0);  // diag(i, 0)
    QuadratureSpec spec;
    spec.samples = 512;
    spec.seed = 611;
    GeodesicState st = make_state(g, Mat::identity(Field::H, 2), z);
    Trajectory traj = integrate(st, 1.0, 0.02, spec);
    CHECK(traj.completed);
    CHECK(traj.recenters > 0);  // |x| reaches 1 along the ray
    CHECK(max_deviation_from_exponential(traj, z, Mat::identity(Field::H, 2)) < 1e-4);
    // Membership along the trajectory.
    for (const auto& p : traj.points) CHECK(p.membership_residual < 1e-6);
}

TEST_CASE("boost trajectory stays on the one-parameter image (SU(1,1))") {
    GroupId g = split_group(Field::C, 1);
    Mat z = boost_e(g);
    z *= 1.0 / std::sqrt(2.0);
    GeodesicState st = make_state(g, Mat::identity(Field::C, 2), z);
    Trajectory traj = integrate(st, 1.0, 0.01, torus_spec(1024));
    CHECK(traj.completed);
    double worst = 0;
    for (const auto& p : traj.points) {
        double num = p.g.at(0, 1).w + p.g.at(1, 0).w;
        double den = p.g.at(0, 0).w + p.g.at(1, 1).w;
        double s = std::tanh(std::atanh(std::clamp(num / den, -0.999999, 0.999999)));
        Mat ref = boost_sigma(g, s);
        worst = std::max(worst, frob_norm(p.g - ref));
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("energy conservation and time reversal") {
    GroupId g = split_group(Field::C, 1);
    Rng rng(63);
    Mat z = random_algebra(g, rng, 1.0);
    GeodesicState st = make_state(g, Mat::identity(Field::C, 2), z);
    Trajectory traj = integrate(st, 1.0, 1e-3, torus_spec(512));
    CHECK(traj.completed);
    double e0 = traj.points.front().energy;
    double drift = 0;
    for (const auto& p : traj.points) drift = std::max(drift, std::abs(p.energy - e0) / e0);
    CHECK(drift < 0.005);

    // Time reversal: run forward, negate the final chart velocity, run the
    // same duration back, land at the start.
    Trajectory fwd = integrate(st, 0.5, 0.01, torus_spec(512));
    GeodesicState rev = fwd.final_state;
    for (double& vi : rev.v) vi = -vi;
    Trajectory bwd = integrate(rev, 0.5, 0.01, torus_spec(512));
    CHECK(frob_norm(bwd.points.back().g - Mat::identity(Field::C, 2)) < 1e-5);
}

TEST_CASE("geodesic defect along the rigid ray vs the 1-D FD noise floor") {
    // Floor: |Gamma_FD - Gamma_closed| * v^2 on the one-dimensional chart.
    Chart c1 = boost_chart();
    SampleSet s1 = build_samples(compact_of(c1.g), torus_spec(2048));
    double floor = 0.0;
    for (double x : {0.0, 0.2, 0.4}) {
        std::vector<double> xs{x};
        auto gamma = christoffel(c1, xs, s1, 1e-3);
        double exact = -std::tanh(x / std::sqrt(2.0)) / std::sqrt(2.0);
        floor = std::max(floor, std::abs(gamma[0] - exact));
    }
    // Defect of the exactly-geodesic ray in Sp(1,1).
    GroupId g = split_group(Field::H, 1);
    Chart c = make_chart(g, Mat::identity(Field::H, 2));
    Mat z = Mat::zero(Field::H, 2, 2);
    z.at(0, 0) = Quat(0, 1, 0, 0);
    QuadratureSpec spec;
    spec.samples = 512;
    spec.seed = 640;
    SampleSet samples = build_samples(compact_of(g), spec);
    std::vector<double> v(c.basis.size(), 0.0);
    for (size_t i = 0; i < c.basis.size(); ++i) v[i] = frob_inner(z, c.basis[i]);
    double defect = 0.0;
    for (double t : {0.05, 0.15}) {
        std::vector<double> x(v.size());
        for (size_t i = 0; i < v.size(); ++i) x[i] = t * v[i];
        auto a = geodesic_acceleration(c, x, v, samples, 1e-3);
        defect = std::max(defect, norm2v(a));
    }
    CHECK(defect < 5 * floor + 1e-9);
}

TEST_CASE("bi-invariant sub-case: Christoffel vanishes at the K-chart origin") {
    GroupId g = split_group(Field::H, 1);
    std::vector<Mat> kbasis;
    const Quat units[3] = {Quat(0, 1, 0, 0), Quat(0, 0, 1, 0), Quat(0, 0, 0, 1)};
    for (const Quat& u : units) {
        Mat a = Mat::zero(Field::H, 2, 2), b = Mat::zero(Field::H, 2, 2);
        a.at(0, 0) = u;
        b.at(1, 1) = u;
        kbasis.push_back(a);
        kbasis.push_back(b);
    }
    Chart c = make_chart(g, Mat::identity(Field::H, 2), kbasis);
    QuadratureSpec spec;
    spec.samples = 1024;
    spec.seed = 650;
    for (auto& gen : unit_translation_symmetry(compact_of(g))) spec.orbit_generators.push_back(gen);
    SampleSet samples = build_samples(compact_of(g), spec);
    std::vector<double> zero(kbasis.size(), 0.0);
    for (double h : {1e-3, 5e-4}) {
        auto gamma = christoffel(c, zero, samples, h);
        double worst = 0;
        for (double v : gamma) worst = std::max(worst, std::abs(v));
        CHECK(worst < 1e-5);
    }
}

TEST_CASE("totally geodesic checks at the smallest sizes") {
    QuadratureSpec spec;
    spec.samples = 1024;
    spec.seed = 660;
    // Trivial direction.
    GroupId o11 = split_group(Field::R, 1);
    GroupId su11 = split_group(Field::C, 1);
    CHECK(totally_geodesic_check(o11, su11, Mat::zero(Field::R, 2, 2), 0.3, 0.01, spec) == 0.0);
    // Oo(1,1) inside SU(1,1): trajectory stays real.
    Rng rng(66);
    Mat z = random_algebra(o11, rng, 1.0);
    CHECK(totally_geodesic_check(o11, su11, z, 1.0, 0.01, spec) < 1e-6);
    // U(1,1) inside Sp(1,1): commutes with i.
    GroupId u11 = split_group(Field::C, 1, false);
    GroupId sp11 = split_group(Field::H, 1);
    Mat zu = random_algebra(u11, rng, 1.0);
    CHECK(totally_geodesic_check(u11, sp11, zu, 1.0, 0.01, spec) < 1e-4);
}

TEST_CASE("fixed point algebra") {
    // R, n = 3: one line spanned by (0 I; I 0).
    GroupId g = split_group(Field::R, 3);
    auto basis = fixed_point_algebra(g);
    REQUIRE(basis.size() == 1);
    Mat e = Mat::zero(Field::R, 6, 6);
    for (int i = 0; i < 3; ++i) {
        e.at(i, 3 + i) = Quat(1.0 / std::sqrt(6.0));
        e.at(3 + i, i) = Quat(1.0 / std::sqrt(6.0));
    }
    CHECK(std::min(max_abs(basis[0] - e), max_abs(basis[0] + e)) < 1e-10);

    // C, n = 3: block form (alpha I, conj(lambda) I; lambda I, beta I) with
    // alpha + beta = 0 -> 3 real parameters.
    GroupId gc = split_group(Field::C, 3);
    auto cbasis = fixed_point_algebra(gc);
    CHECK(cbasis.size() == 3);
    Rng rng(67);
    // A random element of the computed space commutes with every k_i.
    Mat elem = Mat::zero(Field::C, 6, 6);
    for (const Mat& b : cbasis) {
        Mat t = b;
        t *= rng.normal();
        elem += t;
    }
    for (int i = 2; i <= 3; ++i) {
        Mat a = plane_rotation_generator(Field::C, 3, i);
        Mat k = Mat::zero(Field::C, 6, 6);
        set_block(k, 0, 0, a);
        set_block(k, 3, 3, a);
        CHECK(max_abs(matmul(elem, k) - matmul(k, elem)) < 1e-12);
        // Block structure: diagonal blocks proportional to iI, off-diagonal to I.
    }
    for (const Mat& b : cbasis) {
        for (int r = 0; r < 3; ++r)
            for (int cidx = 0; cidx < 3; ++cidx) {
                if (r == cidx) continue;
                CHECK(qnorm(b.at(r, cidx)) < 1e-10);          // alpha I block
                CHECK(qnorm(b.at(r, 3 + cidx)) < 1e-10);      // lambda I block
            }
        CHECK(std::abs(b.at(0, 0).w) < 1e-10);  // alpha is imaginary
    }
}

TEST_CASE("arc length: constant curve and the SU(1,1) partial integral") {
    GroupId g = split_group(Field::C, 1);
    Curve constant = [&](double) {
        return CurveSample{Mat::identity(Field::C, 2), Mat::zero(Field::C, 2, 2)};
    };
    LengthValue zero = arc_length(g, constant, 0.0, 1.0, torus_spec(128), 16, false);
    CHECK(zero.value == 0.0);

    Curve sigma = [&](double t) {
        return CurveSample{boost_sigma(g, t), boost_sigma_velocity(g, t)};
    };
    double eps = 1e-2;
    LengthValue lv = arc_length(g, sigma, 0.0, 1.0 - eps, torus_spec(16384), 64, true);
    double want = 2 * std::sqrt(kPi) * std::asin(1.0 - eps);
    CHECK(lv.value == doctest::Approx(want).epsilon(2e-3));
    CHECK(std::abs(lv.value - want) < 5 * lv.error + 2e-3 * want);
}

TEST_CASE("starved sampling escalates and stops in a controlled way") {
    GroupId g = split_group(Field::R, 3);
    Rng rng(68);
    Mat z = random_algebra(g, rng, 1.0);
    QuadratureSpec spec;
    spec.samples = 1;  // rank-deficient on purpose
    spec.seed = 680;
    GeodesicState st = make_state(g, Mat::identity(Field::R, 6), z);
    Trajectory traj;
    CHECK_NOTHROW(traj = integrate(st, 0.04, 0.02, spec));
    CHECK((traj.sample_escalations >= 1 || !traj.completed));
}
