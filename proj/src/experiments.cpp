#include "mobius/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>

#include "mobius/errors.hpp"

namespace mobius::experiments {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr uint64_t kDefaultSeed = 20240601;

std::string now_iso8601() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

struct CsvWriter {
    std::ofstream out;
    CsvWriter(const std::string& path, const std::string& schema, const std::string& columns) {
        out.open(path);
        out << "# schema=" << schema << " generated_at=" << now_iso8601() << "\n";
        out << columns << "\n";
        out.precision(17);
    }
    template <typename... T>
    void row(T... vals) {
        bool first = true;
        ((out << (first ? "" : ","), first = false, out << vals), ...);
        out << "\n";
    }
};

// ---- shared computation helpers -----------------------------------------

Curve sigma_curve(const GroupId& g) {
    return [g](double t) { return CurveSample{boost_sigma(g, t), boost_sigma_velocity(g, t)}; };
}

MetricValue sigma_norm2(const GroupId& g, double t, const QuadratureSpec& spec) {
    MobiusElement e(g, boost_sigma(g, t), false);
    return inner(e, boost_sigma_velocity(g, t), boost_sigma_velocity(g, t), spec);
}

int torus_grid_for(double one_minus_t) {
    double need = 40.0 / std::max(one_minus_t, 1e-6);
    return static_cast<int>(std::min(262144.0, std::max(8192.0, need)));
}

// Random element of Lie(M) as a candidate X for diag(X, 0); traceless over C
// (required for membership of diag(X,0) in su(n,n)).
Mat random_m_direction(const GroupId& g, Rng& rng) {
    GroupId m = compact_of(g);
    Mat x = random_algebra(m, rng, 1.0);
    if (g.field == Field::C && g.det_one) {
        Quat tr;
        for (int i = 0; i < m.n; ++i) tr += x.at(i, i);
        for (int i = 0; i < m.n; ++i) x.at(i, i) -= (1.0 / m.n) * tr;
        double nrm = frob_norm(x);
        if (nrm > 1e-12) x *= 1.0 / nrm;
    }
    return x;
}

Mat diag_pair(const GroupId& g, const Mat& x, const Mat& y) {
    Mat z = Mat::zero(g.field, 2 * g.n, 2 * g.n);
    set_block(z, 0, 0, x);
    set_block(z, g.n, g.n, y);
    return z;
}

// Random element of K = M x M (with the S(U x U) determinant correction for
// SU(n,n)).
Mat random_k(const GroupId& g, Rng& rng) {
    GroupId m = compact_of(g);
    Mat a = haar_sample(m, rng);
    Mat b = haar_sample(m, rng);
    if (g.field == Field::C && g.det_one) {
        Quat d = qmul(det(a).v, det(b).v);
        Quat phi = qconj(d);  // |d| = 1
        for (int i = 0; i < m.n; ++i) b.at(i, 0) = qmul(b.at(i, 0), phi);
    }
    return diag_pair(g, a, b);
}

double rigid_geodesic_deviation(const GroupId& g, const Mat& x, bool second_factor, double dt,
                                long samples, uint64_t seed, int workers,
                                Trajectory* traj_out = nullptr) {
    Mat zero = Mat::zero(g.field, g.n, g.n);
    Mat z = second_factor ? diag_pair(g, zero, x) : diag_pair(g, x, zero);
    QuadratureSpec spec;
    spec.samples = samples;
    spec.seed = seed;
    spec.workers = workers;
    GeodesicState st = make_state(g, Mat::identity(g.field, 2 * g.n), z);
    Trajectory traj = integrate(st, 1.0, dt, spec);
    double dev = traj.completed
                     ? max_deviation_from_exponential(traj, z, Mat::identity(g.field, 2 * g.n))
                     : 1e9;
    if (traj_out) *traj_out = std::move(traj);
    return dev;
}

void write_trajectory_csv(const std::string& path, const GroupId& g, const Trajectory& traj) {
    const int sz = 2 * g.n;
    std::string cols = "t";
    const int comps = field_real_dim(g.field);
    const char* part[4] = {"", "_i", "_j", "_k"};
    for (int r = 0; r < sz; ++r)
        for (int c = 0; c < sz; ++c)
            for (int p = 0; p < comps; ++p)
                cols += ",g" + std::to_string(r) + std::to_string(c) + part[p];
    cols += ",energy,membership_residual";
    CsvWriter csv(path, "trajectory-v1", cols);
    for (const auto& pt : traj.points) {
        csv.out << pt.t;
        for (int r = 0; r < sz; ++r)
            for (int c = 0; c < sz; ++c) {
                const Quat& q = pt.g.at(r, c);
                csv.out << "," << q.w;
                if (comps > 1) csv.out << "," << q.x;
                if (comps > 2) csv.out << "," << q.y << "," << q.z;
            }
        csv.out << "," << pt.energy << "," << pt.membership_residual << "\n";
    }
}

struct TgPair {
    GroupId src, dst;
    double dt;
    long samples;
    const char* label;
};

std::vector<TgPair> default_tg_pairs() {
    return {
        {split_group(Field::R, 1), split_group(Field::C, 1), 0.01, 2048, "Oo(1,1) in SU(1,1)"},
        {split_group(Field::C, 1, false), split_group(Field::H, 1), 0.01, 2048, "U(1,1) in Sp(1,1)"},
        {split_group(Field::R, 1), split_group(Field::H, 1), 0.01, 2048, "Oo(1,1) in Sp(1,1)"},
        {split_group(Field::C, 2, false), split_group(Field::R, 4), 0.025, 512, "U(2,2) in Oo(4,4)"},
        {split_group(Field::H, 1), split_group(Field::R, 4), 0.025, 512, "Sp(1,1) in Oo(4,4)"},
    };
}

double tg_pair_residual(const TgPair& p, uint64_t seed, int workers, double dt_override = 0.0,
                        double total_time = 1.0) {
    Rng rng(seed);
    Mat z = random_algebra(p.src, rng, 1.0);
    QuadratureSpec spec;
    spec.samples = p.samples;
    spec.seed = seed ^ 0x9e3779b97f4a7c15ULL;
    spec.workers = workers;
    return totally_geodesic_check(p.src, p.dst, z, total_time,
                                  dt_override > 0 ? dt_override : p.dt, spec);
}

std::vector<GroupId> desk_groups() {
    return {split_group(Field::R, 3), split_group(Field::R, 4), split_group(Field::C, 1),
            split_group(Field::C, 2), split_group(Field::H, 1)};
}

// ---- config plumbing ------------------------------------------------------

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) throw ConfigError(where + "." + it.key(), "unknown key");
}

struct Common {
    uint64_t seed = kDefaultSeed;
    std::string out_dir = "mobius-out";
    int workers = 0;
    bool has_dt = false;
    double dt = 0.02;
    double total_time = 1.0;
    long samples = 100000;
    int grid = 8192;
    bool has_quadrature = false;
    bool has_quad_seed = false;
    uint64_t quad_seed = 0;
    QuadMode mode = QuadMode::MonteCarlo;

    uint64_t quadrature_seed() const { return has_quad_seed ? quad_seed : seed; }
};

Common parse_common(const json& cfg, const RunOptions& opts) {
    Common c;
    if (cfg.contains("seed")) c.seed = cfg.at("seed").get<uint64_t>();
    if (opts.has_seed_override) c.seed = opts.seed_override;
    if (cfg.contains("out_dir")) c.out_dir = cfg.at("out_dir").get<std::string>();
    if (!opts.out_dir_override.empty()) c.out_dir = opts.out_dir_override;
    if (cfg.contains("workers")) c.workers = cfg.at("workers").get<int>();
    if (opts.workers > 0) c.workers = opts.workers;
    if (cfg.contains("integrator")) {
        const json& integ = cfg.at("integrator");
        check_keys(integ, {"dt", "T"}, "integrator");
        if (integ.contains("dt")) {
            c.dt = integ.at("dt").get<double>();
            c.has_dt = true;
        }
        if (integ.contains("T")) c.total_time = integ.at("T").get<double>();
    }
    if (cfg.contains("quadrature")) {
        const json& q = cfg.at("quadrature");
        check_keys(q, {"mode", "samples", "grid", "seed"}, "quadrature");
        c.has_quadrature = true;
        if (q.contains("mode")) {
            std::string m = q.at("mode").get<std::string>();
            if (m == "monte-carlo")
                c.mode = QuadMode::MonteCarlo;
            else if (m == "weyl-torus")
                c.mode = QuadMode::WeylTorus;
            else
                throw ConfigError("quadrature.mode", "expected monte-carlo or weyl-torus");
        }
        if (q.contains("samples")) c.samples = q.at("samples").get<long>();
        if (q.contains("grid")) c.grid = q.at("grid").get<int>();
        if (q.contains("seed")) {
            c.has_quad_seed = true;
            c.quad_seed = q.at("seed").get<uint64_t>();
        }
    }
    std::filesystem::create_directories(c.out_dir);
    return c;
}

json report_header(const std::string& scenario, const std::string& claim, const Common& c) {
    json r;
    r["scenario"] = scenario;
    r["verifies"] = claim;
    r["seed"] = c.seed;
    r["workers"] = c.workers;
    r["generated_at"] = now_iso8601();
    return r;
}

void write_report(const json& report, const Common& c, const std::string& scenario) {
    std::ofstream out(c.out_dir + "/" + scenario + ".json");
    out << report.dump(2) << "\n";
}

// ---- scenarios ------------------------------------------------------------

json scenario_finite_length(const json& cfg, const Common& c) {
    std::vector<double> epsilons{1e-1, 1e-2, 1e-3, 1e-4};
    if (cfg.contains("epsilons")) epsilons = cfg.at("epsilons").get<std::vector<double>>();
    std::vector<std::string> names{"SU(1,1)", "SU(2,2)", "Sp(1,1)"};
    if (cfg.contains("groups")) names = cfg.at("groups").get<std::vector<std::string>>();

    json rep = report_header("finite-length", "boost curve has finite length; limit value on U1", c);
    CsvWriter csv(c.out_dir + "/finite-length.csv", "finite-length-v1",
                  "group,epsilon,length,error");
    const double target = std::pow(kPi, 1.5);
    bool all_pass = true;
    json groups = json::array();
    for (const std::string& name : names) {
        GroupId g = parse_group(name);
        std::vector<double> lengths;
        json rows = json::array();
        for (double eps : epsilons) {
            QuadratureSpec spec;
            spec.workers = c.workers;
            spec.seed = c.quadrature_seed();
            if (g.field == Field::C && g.n == 2) {
                spec.mode = QuadMode::MonteCarlo;
                spec.samples = c.has_quadrature ? c.samples : 400000;
            } else {
                spec.mode = QuadMode::WeylTorus;
                spec.grid = torus_grid_for(eps);
            }
            LengthValue lv = arc_length(g, sigma_curve(g), 0.0, 1.0 - eps,
                                        spec, spec.mode == QuadMode::WeylTorus ? 160 : 64, true);
            lengths.push_back(lv.value);
            csv.row(name, eps, lv.value, lv.error);
            rows.push_back(json{{"epsilon", eps}, {"length", lv.value}, {"error", lv.error}});
        }
        bool pass;
        double metric_val = 0.0;
        if (g.field == Field::C && g.n == 1) {
            metric_val = std::abs(lengths.back() - target) / target;
            pass = metric_val < 0.01;
        } else {
            // Cauchy-style boundedness: shrinking increments, small tail.
            bool shrinking = true;
            std::vector<double> inc;
            for (size_t i = 1; i < lengths.size(); ++i)
                inc.push_back(std::abs(lengths[i] - lengths[i - 1]));
            for (size_t i = 1; i < inc.size(); ++i) shrinking = shrinking && inc[i] < inc[i - 1];
            metric_val = inc.empty() ? 0.0 : inc.back() / lengths.back();
            pass = shrinking && metric_val < 0.05;
        }
        all_pass = all_pass && pass;
        groups.push_back(json{{"group", name},
                              {"lengths", rows},
                              {"criterion", g.field == Field::C && g.n == 1
                                                ? "relative distance to pi^{3/2}"
                                                : "tail Cauchy increment / total"},
                              {"value", metric_val},
                              {"pass", pass}});
    }
    rep["target_pi_3_2"] = target;
    rep["groups"] = groups;
    rep["pass"] = all_pass;
    return rep;
}

json scenario_mass_concentration(const json& cfg, const Common& c) {
    long count = cfg.contains("count") ? cfg.at("count").get<long>() : 100;
    std::vector<double> t_grid{0.5, 1, 2, 3, 4, 5};
    if (cfg.contains("t_grid")) t_grid = cfg.at("t_grid").get<std::vector<double>>();
    double det_floor = cfg.contains("det_floor") ? cfg.at("det_floor").get<double>() : 1e-3;
    double tol = cfg.contains("tolerance") ? cfg.at("tolerance").get<double>() : 0.02;

    GroupId m = compact_group(Field::C, 2);
    GroupId g = split_group(Field::C, 2);
    Rng rng(c.seed);
    std::vector<Mat> points;
    for (long i = 0; i < count; ++i) {
        Mat q = haar_sample(m, rng);
        if (eig_margin(q, 1.0) > det_floor) points.push_back(std::move(q));
    }
    json rep = report_header("mass-concentration", "boost flow sends generic mass to the identity", c);
    CsvWriter csv(c.out_dir + "/mass-concentration.csv", "mass-concentration-v1",
                  "t,max_deviation,mean_deviation,count");
    const Mat eye = Mat::identity(Field::C, 2);
    double final_max = 0.0;
    json rows = json::array();
    for (double t : t_grid) {
        MobiusElement gt(g, boost_gamma(g, t), false);
        double worst = 0.0, mean = 0.0;
        for (const Mat& q : points) {
            double dev = frob_norm(act(gt, q) - eye);
            worst = std::max(worst, dev);
            mean += dev;
        }
        mean /= std::max<size_t>(1, points.size());
        csv.row(t, worst, mean, points.size());
        rows.push_back(json{{"t", t}, {"max_deviation", worst}, {"mean_deviation", mean}});
        final_max = worst;
    }
    rep["filtered_points"] = points.size();
    rep["rows"] = rows;
    rep["final_max_deviation"] = final_max;
    rep["tolerance"] = tol;
    rep["pass"] = final_max < tol;
    return rep;
}

json scenario_totally_geodesic(const json& cfg, const Common& c) {
    (void)cfg;
    json rep = report_header("totally-geodesic", "the five split-group inclusions are totally geodesic", c);
    json rows = json::array();
    bool all = true;
    for (const TgPair& p : default_tg_pairs()) {
        double res = tg_pair_residual(p, c.seed, c.workers, c.has_dt ? c.dt : 0.0, c.total_time);
        bool pass = res < 1e-4;
        all = all && pass;
        rows.push_back(json{{"pair", p.label}, {"max_residual", res}, {"pass", pass}});
    }
    rep["pairs"] = rows;
    rep["tolerance"] = 1e-4;
    rep["pass"] = all;
    return rep;
}

json scenario_isometry_kxk(const json& cfg, const Common& c) {
    long tuples = cfg.contains("count") ? cfg.at("count").get<long>() : 1000;
    json rep = report_header("isometry-KxK", "K x K acts by isometries (common-random-numbers check)", c);
    json rows = json::array();
    bool all = true;
    for (const GroupId& g : desk_groups()) {
        Rng rng(c.seed ^ std::hash<std::string>{}(group_name(g)));
        double worst = 0.0;
        for (long i = 0; i < tuples; ++i) {
            Mat k1 = random_k(g, rng), k2 = random_k(g, rng);
            Mat gm = random_element(g, rng, 0.7);
            Mat x = matmul(random_algebra(g, rng, 1.0), gm);
            QuadratureSpec spec;
            spec.samples = 128;
            spec.seed = rng.raw();
            spec.workers = 1;
            MobiusElement ge(g, gm, false);
            worst = std::max(worst, isometry_residual(k1, k2, ge, x, spec));
        }
        bool pass = worst < 1e-9;
        all = all && pass;
        rows.push_back(json{{"group", group_name(g)}, {"max_residual", worst}, {"pass", pass}});
    }
    rep["groups"] = rows;
    rep["tolerance"] = 1e-9;
    rep["pass"] = all;
    return rep;
}

json scenario_rigid_geodesic(const json& cfg, const Common& c) {
    long per_group = cfg.contains("count") ? cfg.at("count").get<long>() : 5;
    json rep = report_header("rigid-geodesic", "one-factor rigid rotations are geodesics of G", c);
    struct Item {
        GroupId g;
        double dt;
        long samples;
    };
    std::vector<Item> items{{split_group(Field::R, 3), 0.02, 512},
                            {split_group(Field::R, 4), 0.025, 512},
                            {split_group(Field::C, 2), 0.02, 512},
                            {split_group(Field::H, 1), 0.01, 1024}};
    json rows = json::array();
    bool all = true;
    for (const Item& it : items) {
        Rng rng(c.seed ^ std::hash<std::string>{}(group_name(it.g)));
        double worst = 0.0;
        for (long k = 0; k < per_group; ++k) {
            Mat x = random_m_direction(it.g, rng);
            Trajectory traj;
            double dev = rigid_geodesic_deviation(it.g, x, k % 2 == 1, c.has_dt ? c.dt : it.dt,
                                                  it.samples, rng.raw(),
                                                  c.workers, k == 0 ? &traj : nullptr);
            if (k == 0)
                write_trajectory_csv(c.out_dir + "/trajectory-" + group_name(it.g) + ".csv", it.g,
                                     traj);
            worst = std::max(worst, dev);
        }
        bool pass = worst < 1e-4;
        all = all && pass;
        rows.push_back(json{{"group", group_name(it.g)}, {"max_deviation", worst}, {"pass", pass}});
    }
    rows.push_back(json{{"group", "SU(1,1)"},
                        {"note", "skipped: diag(X,0) tangent to SU(1,1) forces tr X = 0, so X = 0"},
                        {"pass", true}});
    rep["groups"] = rows;
    rep["tolerance"] = 1e-4;
    rep["pass"] = all;
    return rep;
}

json scenario_fixed_point_algebra(const json& cfg, const Common& c) {
    (void)cfg;
    json rep = report_header("fixed-point-algebra",
                             "centralizer of the k_i inside the Lie algebra is one line over R", c);
    json rows = json::array();
    bool all = true;
    for (int n : {3, 4}) {
        GroupId g = split_group(Field::R, n);
        auto basis = fixed_point_algebra(g);
        bool pass = basis.size() == 1;
        double span_res = 1.0;
        if (pass) {
            Mat e = Mat::zero(Field::R, 2 * n, 2 * n);
            for (int i = 0; i < n; ++i) {
                e.at(i, n + i) = Quat(1.0 / std::sqrt(2.0 * n));
                e.at(n + i, i) = Quat(1.0 / std::sqrt(2.0 * n));
            }
            span_res = std::min(max_abs(basis[0] - e), max_abs(basis[0] + e));
            pass = span_res < 1e-10;
        }
        all = all && pass;
        rows.push_back(json{{"group", group_name(g)},
                            {"dimension", basis.size()},
                            {"span_residual", span_res},
                            {"pass", pass}});
    }
    // Informational: the complex case has the 3-parameter block form.
    auto cbasis = fixed_point_algebra(split_group(Field::C, 3));
    rows.push_back(json{{"group", "SU(3,3)"}, {"dimension", cbasis.size()}, {"expected", 3}});
    rep["groups"] = rows;
    rep["pass"] = all && cbasis.size() == 3;
    return rep;
}

json scenario_lowdim_diagrams(const json& cfg, const Common& c) {
    long samples = cfg.contains("count") ? cfg.at("count").get<long>() : 1000;
    json rep = report_header("lowdim-diagrams",
                             "equivalence squares with circle/sphere motions commute", c);
    json rows = json::array();
    bool all = true;
    const std::pair<Diagram, const char*> items[] = {
        {Diagram::O22, "O22"}, {Diagram::Sp11, "sp11"}, {Diagram::SL4, "sl4"}};
    for (auto [which, name] : items) {
        DiagramReport dr = diagram_check(which, samples, c.seed);
        all = all && dr.pass;
        json row{{"diagram", name},
                 {"samples", dr.samples},
                 {"max_residual", dr.max_residual},
                 {"pass", dr.pass}};
        if (which == Diagram::O22) row["right_factor_triviality"] = dr.aux_residual;
        rows.push_back(row);
    }
    rep["diagrams"] = rows;
    rep["pass"] = all;
    return rep;
}

json scenario_corollary7(const json& cfg, const Common& c) {
    long mixed_count = cfg.contains("count") ? cfg.at("count").get<long>() : 10;
    json rep = report_header("corollary7",
                             "one-factor rotations are geodesics; mixed rotations are not (Oo(3,3))", c);
    QuadratureSpec spec;
    spec.samples = 512;
    spec.seed = c.seed;
    spec.workers = c.workers;
    const Quat qi(0, 1, 0, 0), qj(0, 0, 1, 0), qk(0, 0, 0, 1);
    const double dt = c.has_dt ? c.dt : 0.01;

    double floor = 1e-8;
    json singles = json::array();
    for (const Quat& xi : {qi, qj, Quat(0, 0.577350269189626, 0.577350269189626, 0.577350269189626)}) {
        double dev = corollary7_defect_o33(xi, Quat(), c.total_time, dt, spec);
        floor = std::max(floor, dev);
        singles.push_back(json{{"xi", json::array({xi.x, xi.y, xi.z})}, {"defect", dev}});
    }
    bool singles_pass = floor < 1e-4;

    Rng rng(c.seed);
    auto rand_im = [&]() {
        Quat q(0, rng.normal(), rng.normal(), rng.normal());
        return (1.0 / qnorm(q)) * q;
    };
    double min_mixed = 1e300;
    json mixed = json::array();
    for (long i = 0; i < mixed_count; ++i) {
        Quat xi = rand_im(), eta = rand_im();
        double dev = corollary7_defect_o33(xi, eta, c.total_time, dt, spec);
        min_mixed = std::min(min_mixed, dev);
        mixed.push_back(json{{"defect", dev}});
    }
    bool mixed_pass = min_mixed > 10.0 * floor;

    // Sp(1,1): every mixed pair stays geodesic (the compact factor product is
    // totally geodesic there).
    double sp_worst = 0.0;
    for (auto [xi, eta] : {std::pair{qi, qi}, {qi, qj}, {qj, qk}}) {
        QuadratureSpec sp_spec = spec;
        sp_spec.samples = 2048;
        sp_worst = std::max(sp_worst, corollary7_defect_sp11(xi, eta, c.total_time, dt, sp_spec));
    }
    bool sp_pass = sp_worst < 1e-4;

    rep["o33_single_factor"] = singles;
    rep["o33_noise_floor"] = floor;
    rep["o33_mixed"] = mixed;
    rep["o33_min_mixed_defect"] = min_mixed;
    rep["o33_separation"] = min_mixed / floor;
    rep["sp11_max_defect"] = sp_worst;
    rep["pass"] = singles_pass && mixed_pass && sp_pass;
    return rep;
}

using ScenarioFn = json (*)(const json&, const Common&);

struct ScenarioEntry {
    const char* name;
    const char* description;
    ScenarioFn fn;
    std::set<std::string> extra_keys;
};

const ScenarioEntry kScenarioTable[] = {
    {"finite-length", "arc length of the boost curve on [0, 1-eps]; limit pi^{3/2} on U1",
     scenario_finite_length, {"epsilons", "groups"}},
    {"mass-concentration", "||gamma(t)*q - I|| for Haar-random q in U2 under the boost flow",
     scenario_mass_concentration, {"count", "t_grid", "det_floor", "tolerance"}},
    {"totally-geodesic", "geodesics started tangent to an embedded split subgroup stay on it",
     scenario_totally_geodesic, {}},
    {"isometry-KxK", "g -> k1 g k2^{-1} preserves the metric (CRN residual)",
     scenario_isometry_kxk, {"count"}},
    {"rigid-geodesic", "exp(t diag(X,0)) is a geodesic of G", scenario_rigid_geodesic, {"count"}},
    {"fixed-point-algebra", "simultaneous centralizer of the k_i in the Lie algebra",
     scenario_fixed_point_algebra, {}},
    {"lowdim-diagrams", "O22 / sp11 / sl4 equivalence squares", scenario_lowdim_diagrams, {"count"}},
    {"corollary7", "one-factor vs mixed rigid rotations in Oo(3,3) and Sp(1,1)",
     scenario_corollary7, {"count"}},
};

}  // namespace

const std::vector<std::pair<std::string, std::string>> kScenarios = [] {
    std::vector<std::pair<std::string, std::string>> v;
    for (const auto& e : kScenarioTable) v.emplace_back(e.name, e.description);
    return v;
}();

json run_scenario(const json& config, const RunOptions& opts) {
    if (!config.contains("scenario")) throw ConfigError("scenario", "missing");
    std::string name = config.at("scenario").get<std::string>();
    const ScenarioEntry* entry = nullptr;
    for (const auto& e : kScenarioTable)
        if (name == e.name) entry = &e;
    if (!entry) throw ConfigError("scenario", "unknown scenario '" + name + "'");
    std::set<std::string> allowed{"scenario", "seed", "out_dir", "workers", "quadrature", "integrator"};
    allowed.insert(entry->extra_keys.begin(), entry->extra_keys.end());
    check_keys(config, allowed, "config");
    Common c = parse_common(config, opts);
    json rep = entry->fn(config, c);
    write_report(rep, c, name);
    return rep;
}

int run_config_file(const std::string& path, const RunOptions& opts) {
    json config;
    {
        std::ifstream in(path);
        if (!in) {
            std::fprintf(stderr, "error: cannot open config file '%s'\n", path.c_str());
            return 2;
        }
        try {
            in >> config;
        } catch (const std::exception& e) {
            std::fprintf(stderr, "error: config is not valid JSON: %s\n", e.what());
            return 2;
        }
    }
    try {
        json rep = run_scenario(config, opts);
        bool pass = rep.value("pass", false);
        std::printf("%s: %s\n", rep.at("scenario").get<std::string>().c_str(),
                    pass ? "PASS" : "FAIL");
        return pass ? 0 : 1;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    }
}

// ---- acceptance suite -------------------------------------------------------

namespace {

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

CriterionResult criterion(int idx, const std::string& name, bool pass, const std::string& detail,
                          double secs) {
    return {idx, name, pass, detail, secs};
}

char buf_[512];
std::string fmt(const char* f, auto... args) {
    std::snprintf(buf_, sizeof buf_, f, args...);
    return buf_;
}

CriterionResult crit1_closed_form(int workers) {
    Timer tm;
    GroupId g = split_group(Field::C, 1);
    double worst_torus = 0.0, worst_mc = 0.0;
    for (double t : {0.0, 0.3, 0.6, 0.9}) {
        double want = 4.0 * kPi / (1.0 - t * t);
        QuadratureSpec torus;
        torus.mode = QuadMode::WeylTorus;
        torus.grid = 8192;
        double v = sigma_norm2(g, t, torus).value;
        worst_torus = std::max(worst_torus, std::abs(v - want) / want);
        QuadratureSpec mc;
        mc.samples = 1000000;
        mc.seed = 91101 + static_cast<uint64_t>(t * 10);
        mc.workers = workers;
        double vm = sigma_norm2(g, t, mc).value;
        worst_mc = std::max(worst_mc, std::abs(vm - want) / want);
    }
    bool pass = worst_torus < 1e-6 && worst_mc < 0.01;
    return criterion(1, "SU(1,1) metric closed form 4pi/(1-t^2)", pass,
                     fmt("torus rel err %.2e (tol 1e-6), MC rel err %.2e (tol 1e-2)", worst_torus,
                         worst_mc),
                     tm.seconds());
}

CriterionResult crit2_finite_length(int workers) {
    Timer tm;
    const double target = std::pow(kPi, 1.5);
    std::vector<double> eps{1e-1, 1e-2, 1e-3, 1e-4};
    std::string detail;
    bool pass = true;

    {
        GroupId g = split_group(Field::C, 1);
        std::vector<double> ls;
        for (double e : eps) {
            QuadratureSpec spec;
            spec.mode = QuadMode::WeylTorus;
            spec.grid = torus_grid_for(e);
            ls.push_back(arc_length(g, sigma_curve(g), 0.0, 1.0 - e, spec, 160, true).value);
        }
        double rel = std::abs(ls.back() - target) / target;
        pass = pass && rel < 0.01;
        detail += fmt("SU(1,1): L(1e-4)=%.4f vs %.4f (rel %.3e); ", ls.back(), target, rel);
    }
    for (GroupId g : {split_group(Field::C, 2), split_group(Field::H, 1)}) {
        std::vector<double> ls;
        for (double e : eps) {
            QuadratureSpec spec;
            if (g.field == Field::C) {
                spec.mode = QuadMode::MonteCarlo;
                spec.samples = 400000;
                spec.seed = 777;
                spec.workers = workers;
            } else {
                spec.mode = QuadMode::WeylTorus;
                spec.grid = torus_grid_for(e);
            }
            ls.push_back(arc_length(g, sigma_curve(g), 0.0, 1.0 - e, spec, 64, true).value);
        }
        // Cauchy-style boundedness: increments shrink along the ladder and the
        // deepest one is below 5% of the total.
        bool shrinking = true;
        std::vector<double> inc;
        for (size_t i = 1; i < ls.size(); ++i) inc.push_back(std::abs(ls[i] - ls[i - 1]));
        for (size_t i = 1; i < inc.size(); ++i) shrinking = shrinking && inc[i] < inc[i - 1];
        double tail = inc.back() / ls.back();
        pass = pass && shrinking && tail < 0.05;
        detail += fmt("%s: tail increment %.3f%%%s; ", group_name(g).c_str(), 100.0 * tail,
                      shrinking ? ", shrinking" : ", NOT shrinking");
    }
    return criterion(2, "finite length of the boost curve", pass, detail, tm.seconds());
}

CriterionResult crit3_incompleteness_exponent() {
    Timer tm;
    GroupId g = split_group(Field::C, 1);
    std::vector<double> xs, ys;
    for (int i = 0; i < 10; ++i) {
        double u = std::pow(10.0, -1.0 - 2.0 * i / 9.0);  // 1 - t from 1e-1 to 1e-3
        double t = 1.0 - u;
        QuadratureSpec spec;
        spec.mode = QuadMode::WeylTorus;
        spec.grid = 65536;
        double n2 = sigma_norm2(g, t, spec).value;
        xs.push_back(std::log(1.0 - t * t));
        ys.push_back(0.5 * std::log(n2));
    }
    double mx = 0, my = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= xs.size();
    my /= ys.size();
    double num = 0, den = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        num += (xs[i] - mx) * (ys[i] - my);
        den += (xs[i] - mx) * (xs[i] - mx);
    }
    double slope = num / den;
    bool pass = std::abs(slope + 0.5) <= 0.05;
    return criterion(3, "incompleteness exponent -1/2", pass, fmt("fitted slope %.4f", slope),
                     tm.seconds());
}

CriterionResult crit4_isometries() {
    Timer tm;
    bool pass = true;
    std::string detail;
    for (const GroupId& g : desk_groups()) {
        Rng rng(4242 ^ std::hash<std::string>{}(group_name(g)));
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            Mat k1 = random_k(g, rng), k2 = random_k(g, rng);
            Mat gm = random_element(g, rng, 0.7);
            Mat x = matmul(random_algebra(g, rng, 1.0), gm);
            QuadratureSpec spec;
            spec.samples = 128;
            spec.seed = rng.raw();
            spec.workers = 1;
            MobiusElement ge(g, gm, false);
            worst = std::max(worst, isometry_residual(k1, k2, ge, x, spec));
        }
        pass = pass && worst < 1e-9;
        detail += fmt("%s %.1e; ", group_name(g).c_str(), worst);
    }
    return criterion(4, "K x K isometries (CRN residual < 1e-9)", pass, detail, tm.seconds());
}

CriterionResult crit5_bi_invariance() {
    Timer tm;
    bool pass = true;
    std::string detail;
    for (const GroupId& g : desk_groups()) {
        if (g.field == Field::C && g.n == 1) continue;  // no traceless X in u(1)
        Rng rng(5353 ^ std::hash<std::string>{}(group_name(g)));
        MobiusElement id = MobiusElement::identity(g);
        Mat zero = Mat::zero(g.field, g.n, g.n);
        double lo = 1e300, hi = -1e300, sigma = 0.0, swap_gap = 0.0;
        for (int i = 0; i < 20; ++i) {
            Mat x = random_m_direction(g, rng);
            double x2 = frob_inner(x, x);
            QuadratureSpec spec;
            spec.samples = 20000;
            spec.seed = rng.raw();
            MetricValue left = inner(id, diag_pair(g, x, zero), diag_pair(g, x, zero), spec);
            MetricValue right = inner(id, diag_pair(g, zero, x), diag_pair(g, zero, x), spec);
            double r = left.value / x2;
            lo = std::min(lo, r);
            hi = std::max(hi, r);
            sigma = std::max(sigma, left.std_error / x2);
            swap_gap = std::max(swap_gap,
                                std::abs(left.value - right.value) /
                                    std::max(1e-300, 3.0 * (left.std_error + right.std_error) + 1e-9));
        }
        bool ok = (hi - lo) <= 3.0 * (2.0 * sigma) + 1e-9 && swap_gap <= 1.0;
        pass = pass && ok;
        detail += fmt("%s spread %.1e vol-ratio %.4f; ", group_name(g).c_str(), hi - lo,
                      0.5 * (hi + lo) / haar_mass(compact_of(g)));
    }
    return criterion(5, "||(X,0)||^2 = vol(M) |X|^2 = ||(0,X)||^2", pass, detail, tm.seconds());
}

CriterionResult crit6_rigid_geodesics(int workers) {
    Timer tm;
    bool pass = true;
    std::string detail;
    struct Item {
        GroupId g;
        double dt;
        long samples;
    };
    for (const Item& it : {Item{split_group(Field::R, 3), 0.02, 512},
                           Item{split_group(Field::R, 4), 0.025, 512},
                           Item{split_group(Field::C, 2), 0.02, 512},
                           Item{split_group(Field::H, 1), 0.01, 1024}}) {
        Rng rng(6363 ^ std::hash<std::string>{}(group_name(it.g)));
        double worst = 0.0;
        for (int k = 0; k < 5; ++k) {
            Mat x = random_m_direction(it.g, rng);
            worst = std::max(worst, rigid_geodesic_deviation(it.g, x, k % 2 == 1, it.dt, it.samples,
                                                             rng.raw(), workers));
        }
        pass = pass && worst < 1e-4;
        detail += fmt("%s %.1e; ", group_name(it.g).c_str(), worst);
    }
    detail += "SU(1,1) vacuous (tr X = 0 forces X = 0)";
    return criterion(6, "rigid one-factor geodesics track exp(t diag(X,0))", pass, detail,
                     tm.seconds());
}

CriterionResult crit7_totally_geodesic(int workers) {
    Timer tm;
    bool pass = true;
    std::string detail;
    for (const TgPair& p : default_tg_pairs()) {
        double res = tg_pair_residual(p, 7474, workers);
        pass = pass && res < 1e-4;
        detail += fmt("%s %.1e; ", p.label, res);
    }
    return criterion(7, "totally geodesic inclusions (a)-(e)", pass, detail, tm.seconds());
}

CriterionResult crit8_fixed_point_algebra() {
    Timer tm;
    bool pass = true;
    std::string detail;
    for (int n : {3, 4}) {
        GroupId g = split_group(Field::R, n);
        auto basis = fixed_point_algebra(g);
        double span_res = 1.0;
        if (basis.size() == 1) {
            Mat e = Mat::zero(Field::R, 2 * n, 2 * n);
            for (int i = 0; i < n; ++i) {
                e.at(i, n + i) = Quat(1.0 / std::sqrt(2.0 * n));
                e.at(n + i, i) = Quat(1.0 / std::sqrt(2.0 * n));
            }
            span_res = std::min(max_abs(basis[0] - e), max_abs(basis[0] + e));
        }
        bool ok = basis.size() == 1 && span_res < 1e-10;
        pass = pass && ok;
        detail += fmt("n=%d dim=%zu span %.1e; ", n, basis.size(), span_res);
    }
    return criterion(8, "fixed-point algebra is R (0 I; I 0)", pass, detail, tm.seconds());
}

CriterionResult crit9_mass_concentration() {
    Timer tm;
    GroupId m = compact_group(Field::C, 2);
    GroupId g = split_group(Field::C, 2);
    Rng rng(9191);
    MobiusElement g5(g, boost_gamma(g, 5.0), false);
    const Mat eye = Mat::identity(Field::C, 2);
    double worst = 0.0;
    int kept = 0;
    for (int i = 0; i < 100; ++i) {
        Mat q = haar_sample(m, rng);
        if (eig_margin(q, 1.0) <= 1e-3) continue;
        ++kept;
        worst = std::max(worst, frob_norm(act(g5, q) - eye));
    }
    bool pass = worst < 0.02 && kept > 0;
    return criterion(9, "mass concentration at t = 5 on U2", pass,
                     fmt("max ||gamma(5)*q - I|| = %.4f over %d points", worst, kept), tm.seconds());
}

CriterionResult crit10_lowdim_diagrams() {
    Timer tm;
    DiagramReport o22 = diagram_check(Diagram::O22, 1000, 1010);
    DiagramReport sp11 = diagram_check(Diagram::Sp11, 1000, 1011);
    DiagramReport sl4 = diagram_check(Diagram::SL4, 1000, 1012);
    bool pass = o22.pass && sp11.pass && sl4.pass;
    return criterion(10, "O22 / sp11 / sl4 diagrams commute", pass,
                     fmt("O22 %.1e (right-factor %.1e), sp11 %.1e, sl4 %.1e", o22.max_residual,
                         o22.aux_residual, sp11.max_residual, sl4.max_residual),
                     tm.seconds());
}

CriterionResult crit11_corollary7(int workers) {
    Timer tm;
    QuadratureSpec spec;
    spec.samples = 512;
    spec.seed = 1111;
    spec.workers = workers;
    const Quat qi(0, 1, 0, 0), qj(0, 0, 1, 0);
    double floor = 1e-8;
    for (const Quat& xi : {qi, qj}) {
        double dev = corollary7_defect_o33(xi, Quat(), 1.0, 0.01, spec);
        floor = std::max(floor, dev);
    }
    Rng rng(1112);
    double min_mixed = 1e300;
    for (int i = 0; i < 10; ++i) {
        Quat xi(0, rng.normal(), rng.normal(), rng.normal());
        Quat eta(0, rng.normal(), rng.normal(), rng.normal());
        xi = (1.0 / qnorm(xi)) * xi;
        eta = (1.0 / qnorm(eta)) * eta;
        min_mixed = std::min(min_mixed, corollary7_defect_o33(xi, eta, 1.0, 0.01, spec));
    }
    bool pass = floor < 1e-4 && min_mixed > 10.0 * floor;
    return criterion(11, "mixed rotations in Oo(3,3) are not geodesics (iff separation)", pass,
                     fmt("single-factor floor %.2e, min mixed defect %.2e, separation %.0fx", floor,
                         min_mixed, min_mixed / floor),
                     tm.seconds());
}

CriterionResult crit12_graph_oracle() {
    Timer tm;
    bool pass = true;
    std::string detail;
    for (const GroupId& g : desk_groups()) {
        Rng rng(1212 ^ std::hash<std::string>{}(group_name(g)));
        GroupId m = compact_of(g);
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            Mat gm = random_element(g, rng, 0.8);
            Mat u = haar_sample(m, rng);
            MobiusElement ge(g, gm, false);
            worst = std::max(worst, max_abs(act(ge, u) - act_on_graph(ge, u)));
        }
        pass = pass && worst < 1e-9;
        detail += fmt("%s %.1e; ", group_name(g).c_str(), worst);
    }
    return criterion(12, "Mobius formula agrees with the subspace picture", pass, detail,
                     tm.seconds());
}

}  // namespace

std::vector<CriterionResult> run_acceptance(int workers, const std::string& out_dir) {
    std::vector<CriterionResult> results;
    auto push = [&](CriterionResult r) {
        std::printf("[%2d] %-60s %s  (%.1fs)  %s\n", r.index, r.name.c_str(),
                    r.pass ? "PASS" : "FAIL", r.seconds, r.detail.c_str());
        std::fflush(stdout);
        results.push_back(std::move(r));
    };
    push(crit1_closed_form(workers));
    push(crit2_finite_length(workers));
    push(crit3_incompleteness_exponent());
    push(crit4_isometries());
    push(crit5_bi_invariance());
    push(crit6_rigid_geodesics(workers));
    push(crit7_totally_geodesic(workers));
    push(crit8_fixed_point_algebra());
    push(crit9_mass_concentration());
    push(crit10_lowdim_diagrams());
    push(crit11_corollary7(workers));
    push(crit12_graph_oracle());
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        std::ofstream out(out_dir + "/acceptance_report.json");
        out << acceptance_report(results).dump(2) << "\n";
    }
    return results;
}

json acceptance_report(const std::vector<CriterionResult>& results) {
    json rep;
    rep["suite"] = "acceptance";
    rep["generated_at"] = now_iso8601();
    bool all = true;
    json rows = json::array();
    for (const auto& r : results) {
        all = all && r.pass;
        rows.push_back(json{{"index", r.index},
                            {"name", r.name},
                            {"pass", r.pass},
                            {"detail", r.detail},
                            {"seconds", r.seconds}});
    }
    rep["criteria"] = rows;
    rep["pass"] = all;
    return rep;
}

}  // namespace mobius::experiments
