#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mobius/metric.hpp"

using namespace mobius;

namespace {
constexpr double kPi = std::numbers::pi;

Mat diag_pair(const GroupId& g, const Mat& x, const Mat& y) {
    Mat z = Mat::zero(g.field, 2 * g.n, 2 * g.n);
    set_block(z, 0, 0, x);
    set_block(z, g.n, g.n, y);
    return z;
}

Mat boost_direction(const GroupId& g) {
    Mat e = Mat::zero(g.field, 2 * g.n, 2 * g.n);
    for (int i = 0; i < g.n; ++i) {
        e.at(i, g.n + i) = Quat(1);
        e.at(g.n + i, i) = Quat(1);
    }
    return e;
}

}  // namespace

TEST_CASE("zero vector has zero norm") {
    GroupId g = split_group(Field::C, 1);
    QuadratureSpec spec;
    spec.samples = 1000;
    MetricValue v = inner(MobiusElement::identity(g), Mat::zero(Field::C, 2, 2),
                          Mat::zero(Field::C, 2, 2), spec);
    CHECK(v.value == 0.0);
    CHECK(v.std_error == 0.0);
}

TEST_CASE("||(X,0)||^2 = vol(M) |X|^2 with zero variance") {
    Rng rng(41);
    for (const GroupId& g :
         {split_group(Field::R, 3), split_group(Field::C, 2, false), split_group(Field::H, 1)}) {
        GroupId m = compact_of(g);
        Mat x = random_algebra(m, rng, 1.3);
        QuadratureSpec spec;
        spec.samples = 500;
        spec.seed = rng.raw();
        MetricValue v = inner(MobiusElement::identity(g), diag_pair(g, x, Mat::zero(g.field, g.n, g.n)),
                              diag_pair(g, x, Mat::zero(g.field, g.n, g.n)), spec);
        double expect = haar_mass(m) * frob_inner(x, x);
        CHECK(v.value == doctest::Approx(expect).epsilon(1e-12));
        CHECK(v.std_error < 1e-9 * expect);  // integrand is pointwise constant
        // Swap map: ||(0,X)|| equals ||(X,0)||.
        MetricValue w = inner(MobiusElement::identity(g), diag_pair(g, Mat::zero(g.field, g.n, g.n), x),
                              diag_pair(g, Mat::zero(g.field, g.n, g.n), x), spec);
        CHECK(w.value == doctest::Approx(v.value).epsilon(1e-12));
    }
}

TEST_CASE("SU(1,1) boost norms: 4 pi / (1 - t^2)") {
    GroupId g = split_group(Field::C, 1);
    for (double t : {0.0, 0.3, 0.6, 0.9}) {
        double want = 4 * kPi / (1 - t * t);
        MobiusElement s(g, boost_sigma(g, t), false);
        QuadratureSpec torus;
        torus.mode = QuadMode::WeylTorus;
        torus.grid = 4096;
        MetricValue tv = inner(s, boost_sigma_velocity(g, t), boost_sigma_velocity(g, t), torus);
        CHECK(std::abs(tv.value - want) / want < 1e-9);
        QuadratureSpec mc;
        mc.samples = 100000;
        mc.seed = 4100 + static_cast<int>(10 * t);
        MetricValue mv = inner(s, boost_sigma_velocity(g, t), boost_sigma_velocity(g, t), mc);
        CHECK(std::abs(mv.value - want) / want < 0.01);
        CHECK(std::abs(mv.value - want) < 4 * mv.std_error + 1e-9);
    }
}

TEST_CASE("inner is symmetric and exactly linear over a fixed sample set") {
    GroupId g = split_group(Field::H, 1);
    QuadratureSpec spec;
    spec.samples = 2000;
    spec.seed = 99;
    SampleSet samples = build_samples(compact_of(g), spec);
    Rng rng(42);
    MobiusElement e(g, random_element(g, rng, 0.5), false);
    Mat x = matmul(random_algebra(g, rng, 1.0), e.m);
    Mat y = matmul(random_algebra(g, rng, 1.0), e.m);
    Mat z = matmul(random_algebra(g, rng, 1.0), e.m);
    MetricValue xy = inner(e, x, y, samples);
    MetricValue yx = inner(e, y, x, samples);
    CHECK(xy.value == doctest::Approx(yx.value).epsilon(1e-13));
    Mat comb = x;
    comb *= 2.5;
    comb += y;
    MetricValue lin = inner(e, comb, z, samples);
    MetricValue xz = inner(e, x, z, samples);
    MetricValue yz = inner(e, y, z, samples);
    CHECK(lin.value == doctest::Approx(2.5 * xz.value + yz.value).epsilon(1e-11));
}

TEST_CASE("Monte Carlo and torus modes agree for a class-function integrand") {
    GroupId g = split_group(Field::C, 2);
    double t = 0.3;
    MobiusElement s(g, boost_sigma(g, t), false);
    QuadratureSpec torus;
    torus.mode = QuadMode::WeylTorus;
    torus.grid = 128;
    MetricValue tv = inner(s, boost_sigma_velocity(g, t), boost_sigma_velocity(g, t), torus);
    QuadratureSpec mc;
    mc.samples = 200000;
    mc.seed = 4300;
    MetricValue mv = inner(s, boost_sigma_velocity(g, t), boost_sigma_velocity(g, t), mc);
    CHECK(std::abs(tv.value - mv.value) < 3 * mv.std_error);
    // Estimator consistency across seeds.
    QuadratureSpec mc2 = mc.with_seed(4301);
    MetricValue mv2 = inner(s, boost_sigma_velocity(g, t), boost_sigma_velocity(g, t), mc2);
    CHECK(std::abs(mv.value - mv2.value) < 3 * (mv.std_error + mv2.std_error));
}

TEST_CASE("common random numbers make K x K isometries exact") {
    Rng rng(44);
    for (const GroupId& g : {split_group(Field::R, 3), split_group(Field::C, 2)}) {
        GroupId m = compact_of(g);
        // k1 = k2 = I -> exactly zero.
        MobiusElement e(g, random_element(g, rng, 0.6), false);
        Mat x = matmul(random_algebra(g, rng, 1.0), e.m);
        QuadratureSpec spec;
        spec.samples = 256;
        spec.seed = rng.raw();
        Mat eye = Mat::identity(g.field, 2 * g.n);
        CHECK(isometry_residual(eye, eye, e, x, spec) == 0.0);
        double worst = 0;
        for (int it = 0; it < 20; ++it) {
            Mat a1 = haar_sample(m, rng), b1 = haar_sample(m, rng);
            Mat a2 = haar_sample(m, rng), b2 = haar_sample(m, rng);
            if (g.field == Field::C) {
                // force S(UxU)
                Quat f1 = qconj(qmul(det(a1).v, det(b1).v));
                for (int i = 0; i < g.n; ++i) b1.at(i, 0) = qmul(b1.at(i, 0), f1);
                Quat f2 = qconj(qmul(det(a2).v, det(b2).v));
                for (int i = 0; i < g.n; ++i) b2.at(i, 0) = qmul(b2.at(i, 0), f2);
            }
            Mat k1 = diag_pair(g, a1, b1), k2 = diag_pair(g, a2, b2);
            MobiusElement ge(g, random_element(g, rng, 0.6), false);
            Mat xx = matmul(random_algebra(g, rng, 1.0), ge.m);
            QuadratureSpec s2;
            s2.samples = 256;
            s2.seed = rng.raw();
            worst = std::max(worst, isometry_residual(k1, k2, ge, xx, s2));
        }
        CHECK(worst < 1e-9);
    }
}

TEST_CASE("metric tensor: 1x1 chart on the boost line matches inner") {
    GroupId g = split_group(Field::C, 1);
    Mat e = boost_direction(g);
    e = retag(e, Field::C);
    QuadratureSpec spec;
    spec.mode = QuadMode::WeylTorus;
    spec.grid = 2048;
    RealMat gm = metric_tensor(MobiusElement::identity(g), {e}, spec);
    CHECK(gm.rows == 1);
    MetricValue v = inner(MobiusElement::identity(g), e, e, spec);
    CHECK(gm.at(0, 0) == doctest::Approx(v.value).epsilon(1e-12));
    CHECK(gm.at(0, 0) == doctest::Approx(4 * kPi).epsilon(1e-9));
}

TEST_CASE("metric tensor positive definite at random points") {
    Rng rng(45);
    for (const GroupId& g : {split_group(Field::C, 1), split_group(Field::H, 1)}) {
        auto basis = lie_basis(g);
        for (int it = 0; it < 20; ++it) {
            Mat gm = random_element(g, rng, 0.8);
            std::vector<Mat> tangent;
            for (const Mat& b : basis) tangent.push_back(matmul(b, gm));
            QuadratureSpec spec;
            spec.samples = 3000;
            spec.seed = rng.raw();
            CHECK_NOTHROW(metric_tensor(MobiusElement(g, gm, false), tangent, spec));
        }
    }
}

TEST_CASE("metric tensor rejects a rank-deficient basis") {
    GroupId g = split_group(Field::C, 1);
    Mat e = retag(boost_direction(g), Field::C);
    QuadratureSpec spec;
    spec.samples = 2000;
    CHECK_THROWS_AS(metric_tensor(MobiusElement::identity(g), {e, e}, spec),
                    DegenerateMetricError);
}

TEST_CASE("K-block structure of the metric at the identity") {
    Rng rng(46);
    // Semisimple M: off-diagonal cross terms vanish.  SO3 inside Oo(3,3).
    {
        GroupId g = split_group(Field::R, 3);
        GroupId m = compact_of(g);
        Mat x = random_algebra(m, rng, 1.0), y = random_algebra(m, rng, 1.0);
        QuadratureSpec spec;
        spec.samples = 20000;
        spec.seed = 4600;
        MetricValue cross = inner(MobiusElement::identity(g),
                                  diag_pair(g, x, Mat::zero(Field::R, 3, 3)),
                                  diag_pair(g, Mat::zero(Field::R, 3, 3), y), spec);
        CHECK(std::abs(cross.value) < 3 * cross.std_error + 1e-9);
    }
    // U_n couples only through the center: X = Y = iI gives -n vol(M) exactly.
    {
        GroupId g = split_group(Field::C, 2, false);
        Mat ii = Mat::zero(Field::C, 2, 2);
        ii.at(0, 0) = Quat(0, 1);
        ii.at(1, 1) = Quat(0, 1);
        QuadratureSpec torus;
        torus.mode = QuadMode::WeylTorus;
        torus.grid = 64;
        MetricValue cross = inner(MobiusElement::identity(g),
                                  diag_pair(g, ii, Mat::zero(Field::C, 2, 2)),
                                  diag_pair(g, Mat::zero(Field::C, 2, 2), ii), torus);
        double expect = -2.0 * haar_mass(compact_of(g));
        CHECK(cross.value == doctest::Approx(expect).epsilon(1e-10));
        QuadratureSpec mc;
        mc.samples = 50000;
        mc.seed = 4601;
        MetricValue mcv = inner(MobiusElement::identity(g),
                                diag_pair(g, ii, Mat::zero(Field::C, 2, 2)),
                                diag_pair(g, Mat::zero(Field::C, 2, 2), ii), mc);
        CHECK(std::abs(mcv.value - expect) < 3 * mcv.std_error + 1e-9);
    }
}

TEST_CASE("unit-translation symmetrization kills the K cross terms exactly") {
    GroupId g = split_group(Field::H, 1);
    QuadratureSpec spec;
    spec.samples = 512;
    spec.seed = 4700;
    for (auto& gen : unit_translation_symmetry(compact_of(g))) spec.orbit_generators.push_back(gen);
    Rng rng(47);
    for (int it = 0; it < 5; ++it) {
        Quat xi(0, rng.normal(), rng.normal(), rng.normal());
        Quat eta(0, rng.normal(), rng.normal(), rng.normal());
        Mat x = Mat::zero(Field::H, 1, 1), y = Mat::zero(Field::H, 1, 1);
        x.at(0, 0) = xi;
        y.at(0, 0) = eta;
        MetricValue cross = inner(MobiusElement::identity(g), diag_pair(g, x, Mat::zero(Field::H, 1, 1)),
                                  diag_pair(g, Mat::zero(Field::H, 1, 1), y), spec);
        CHECK(std::abs(cross.value) < 1e-10);
    }
}

TEST_CASE("Weyl bound direction: full integral below sup-density times torus integral") {
    GroupId g = split_group(Field::C, 2);
    GroupId m = compact_of(g);
    double t = 0.5;
    MobiusElement s(g, boost_sigma(g, t), false);
    Mat v = boost_sigma_velocity(g, t);
    QuadratureSpec mc;
    mc.samples = 100000;
    mc.seed = 4800;
    MetricValue full = inner(s, v, v, mc);
    // Torus integral of the same integrand against plain d theta, and the
    // density sup over the grid.
    const int grid = 128;
    Mat ginv = inverse(s.m);
    Mat z = matmul(v, ginv);
    double torus_plain = 0.0, sup_density = 0.0;
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            std::vector<double> theta{2 * kPi * i / grid, 2 * kPi * j / grid};
            Mat d = torus_point(m, theta);
            Mat p = act(s, d);
            Mat w = algebra_field(g, z, p);
            torus_plain += frob_inner(w, w) * (2 * kPi / grid) * (2 * kPi / grid);
            sup_density = std::max(sup_density, weyl_density(m, theta));
        }
    CHECK(full.value <= sup_density * torus_plain + 3 * full.std_error);
}

TEST_CASE("results are bitwise independent of the worker count") {
    GroupId g = split_group(Field::R, 3);
    Rng rng(48);
    Mat gm = random_element(g, rng, 0.7);
    std::vector<Mat> tangent;
    for (const Mat& b : lie_basis(g)) tangent.push_back(matmul(b, gm));
    QuadratureSpec s1;
    s1.samples = 4000;
    s1.seed = 4900;
    s1.workers = 1;
    QuadratureSpec s3 = s1;
    s3.workers = 3;
    RealMat g1 = metric_tensor(MobiusElement(g, gm, false), tangent, s1);
    RealMat g3 = metric_tensor(MobiusElement(g, gm, false), tangent, s3);
    for (int i = 0; i < g1.rows; ++i)
        for (int j = 0; j < g1.cols; ++j) CHECK(g1.at(i, j) == g3.at(i, j));
}

TEST_CASE("zero samples is a config error") {
    GroupId m = compact_group(Field::C, 1);
    QuadratureSpec spec;
    spec.samples = 0;
    CHECK_THROWS_AS(build_samples(m, spec), ConfigError);
    QuadratureSpec torus;
    torus.mode = QuadMode::WeylTorus;
    torus.grid = 0;
    CHECK_THROWS_AS(build_samples(m, torus), ConfigError);
}
