#pragma once

#include <functional>
#include <optional>
#include <string>

#include "mobius/metric.hpp"

namespace mobius {

/// Exponential chart on G: x -> exp(sum x_i E_i) * center.
/// The basis should be frob-orthonormal (lie_basis is); the chart is used
/// only on ||x|| <= radius and re-centered at radius/2.
struct Chart {
    GroupId g;
    Mat center;
    std::vector<Mat> basis;
    double radius = 0.5;
};

Chart make_chart(const GroupId& g, const Mat& center);
Chart make_chart(const GroupId& g, const Mat& center, std::vector<Mat> basis);

Mat chart_algebra(const Chart& c, std::span<const double> x);
Mat chart_point(const Chart& c, std::span<const double> x);

/// Right-translated coordinate frame at x: Z_i = dexp_{A(x)}(E_i), the series
/// sum_m ad_A^m(E_i) / (m+1)!.
std::vector<Mat> chart_frame(const Chart& c, std::span<const double> x);

/// Metric tensor in chart coordinates at x, with common random numbers
/// (a fixed SampleSet shared across every stencil point and time step).
RealMat chart_metric(const Chart& c, std::span<const double> x, const SampleSet& samples);

/// Christoffel symbols Gamma^l_{jk} at x by central finite differences of the
/// chart metric with step h, CRN-stabilized.  Layout: [l*d*d + j*d + k].
std::vector<double> christoffel(const Chart& c, std::span<const double> x, const SampleSet& samples,
                                double h = 1e-3);

/// Geodesic acceleration a(x, v) = -Gamma(x)(v, v) from the same FD data;
/// the geodesic-equation defect of a straight chart ray is its norm.
std::vector<double> geodesic_acceleration(const Chart& c, std::span<const double> x,
                                          std::span<const double> v, const SampleSet& samples,
                                          double h = 1e-3);

struct GeodesicState {
    Chart chart;
    std::vector<double> x, v;
    double t = 0.0;
    double energy = 0.0;
};

/// State at group element g0 with initial velocity Z g0 (Z in Lie(G)).
GeodesicState make_state(const GroupId& g, const Mat& g0, const Mat& z_velocity);

struct TrajectoryPoint {
    double t;
    Mat g;
    double energy;
    double membership_residual;
};

struct Trajectory {
    std::vector<TrajectoryPoint> points;
    GeodesicState final_state;
    bool completed = true;
    double stop_time = 0.0;
    std::string stop_reason;
    int recenters = 0;
    int sample_escalations = 0;
};

/// RK4 integration of x'' + Gamma(x)(x',x') = 0 with chart re-centering.
/// On a non-PD metric tensor the sample budget is escalated 4x (twice); a
/// persistent failure ends the run with a diagnostic instead of throwing
/// (expected behavior near the incompleteness boundary).
Trajectory integrate(const GeodesicState& start, double total_time, double dt,
                     const QuadratureSpec& spec, double fd_step = 1e-3);

/// A curve handed to arc_length: position and velocity matrix at time t.
struct CurveSample {
    Mat point;
    Mat velocity;
};
using Curve = std::function<CurveSample(double)>;

struct LengthValue {
    double value = 0.0;
    double error = 0.0;  // quadrature estimate plus propagated MC error
};

/// Arc length by composite Simpson over `panels` panels.  sqrt_grade_upper
/// concentrates nodes toward t1 via t = t1 - (t1-t0)(1-u)^2, suited to speeds
/// with an inverse-square-root blowup at t1.
LengthValue arc_length(const GroupId& g, const Curve& curve, double t0, double t1,
                       const QuadratureSpec& spec, int panels = 64, bool sqrt_grade_upper = false);

/// Residual of the defining relations of the embedded subgroup src inside dst
/// (entrywise-imaginary part, commutators with iI/jI, J, or R_i/R_j).
double inclusion_residual(const GroupId& src, const GroupId& dst, const Mat& g);

/// Integrates a dst-geodesic from the identity with initial velocity
/// embed(src, dst, z_src) and reports the max inclusion residual along it.
/// The sample set is symmetrized so the inclusion's fixed-point isometries
/// hold exactly for the sampled metric.
double totally_geodesic_check(const GroupId& src, const GroupId& dst, const Mat& z_src,
                              double total_time, double dt, const QuadratureSpec& spec);

/// Basis of the subspace of Lie(G) commuting with every k_i = diag(A^i, A^i),
/// i = 2..n, computed as a nullspace over the lie_basis coordinates.
std::vector<Mat> fixed_point_algebra(const GroupId& g);

/// Max Frobenius deviation of a trajectory from t -> mexp(Z, t) * g0.
double max_deviation_from_exponential(const Trajectory& traj, const Mat& z, const Mat& g0);

}  // namespace mobius
