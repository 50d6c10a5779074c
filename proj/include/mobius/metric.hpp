#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mobius/action.hpp"
#include "mobius/groups.hpp"
#include "mobius/linalg.hpp"

namespace mobius {

/// How an integral over M is evaluated.
///   MonteCarlo: Haar samples, weight mass/N each, standard error attached.
///   WeylTorus: tensor grid on the maximal torus against the Weyl density.
///     Only legal when the caller declares the integrand a class function;
///     choosing this mode IS that declaration.
enum class QuadMode { MonteCarlo, WeylTorus };

struct QuadratureSpec {
    QuadMode mode = QuadMode::MonteCarlo;
    long samples = 100000;  // Monte Carlo sample budget (orbit copies included)
    int grid = 64;          // torus points per rank dimension
    uint64_t seed = 12345;
    int workers = 0;  // 0 = hardware concurrency
    /// Optional sample-set symmetrization: generators of a finite group of
    /// maps q -> L q R under which the sample multiset is closed.  Closing the
    /// set makes the corresponding right translations exact isometries of the
    /// sampled metric instead of statistical ones.
    std::vector<std::pair<Mat, Mat>> orbit_generators;
    /// Additionally close the sample set under entrywise conjugation
    /// (applied after the L,R orbit).
    bool conj_orbit = false;
    /// Haar mass override; negative means haar_mass(M).
    double mass_override = -1.0;

    QuadratureSpec with_seed(uint64_t s) const {
        QuadratureSpec q = *this;
        q.seed = s;
        return q;
    }
    QuadratureSpec with_samples(long n) const {
        QuadratureSpec q = *this;
        q.samples = n;
        return q;
    }
};

struct MetricValue {
    double value = 0.0;
    double std_error = 0.0;  // 0 in torus mode
};

/// Realized quadrature nodes on the compact group M.
struct SampleSet {
    GroupId m;
    std::vector<Mat> points;
    std::vector<double> weights;  // per point; MC: mass / N uniformly
    double mass = 0.0;
    bool monte_carlo = true;
    long base_count = 0;  // independent draws (before orbit copies)
    int orbit_size = 1;   // points laid out base-major: index b*orbit + o
    int workers = 0;
};

SampleSet build_samples(const GroupId& m, const QuadratureSpec& spec);

/// Gram matrix of the induced fields of the right-translated directions Zs
/// (elements of Lie(G)) at the group element gmat, integrated over samples.
/// Entries: integral <W_{Z_i}(g*q), W_{Z_j}(g*q)> dmu(q).
RealMat field_gram(const GroupId& g_id, const Mat& gmat, const std::vector<Mat>& zs,
                   const SampleSet& samples, RealMat* std_errors = nullptr);

/// Kinetic-energy inner product of tangent vectors X, Y at g (extrinsic
/// convention: X g^{-1} must lie in Lie(G)).
MetricValue inner(const MobiusElement& g, const Mat& x, const Mat& y, const QuadratureSpec& spec);
MetricValue inner(const MobiusElement& g, const Mat& x, const Mat& y, const SampleSet& samples);

/// Relative defect | ||dF(X)||^2 - ||X||^2 | / ||X||^2 for F(g) = k1 g k2^{-1},
/// evaluated with common random numbers: the second side runs on the same
/// sample set transported by q -> k2 * q, which turns the change of variables
/// in the isometry proof into an identity of finite sums.
double isometry_residual(const Mat& k1, const Mat& k2, const MobiusElement& g, const Mat& x,
                         const QuadratureSpec& spec);

/// Metric tensor on a basis of T_gG.  Throws DegenerateMetricError when the
/// result is not positive definite (rank-deficient basis or starved MC).
RealMat metric_tensor(const MobiusElement& g, const std::vector<Mat>& basis,
                      const QuadratureSpec& spec, std::vector<double>* std_errors = nullptr);

/// Sample-set symmetrization generators that make the fixed-point isometries
/// of the inclusion src -> dst exact for the sampled metric.  Returns (L,R)
/// map generators on M = compact_of(dst); needs_conj reports whether the set
/// must additionally be closed under entrywise conjugation (the real-form
/// inclusions into SU(n,n)).
struct InclusionSymmetry {
    std::vector<std::pair<Mat, Mat>> generators;
    bool needs_conj = false;
};
InclusionSymmetry inclusion_sample_symmetry(const GroupId& src, const GroupId& dst);

/// Left/right unit-quaternion translation generators {q -> u q v} for a
/// quaternionic compact group.  Closure makes the induced metric on the
/// maximal compact K = Sp_n x Sp_n of Sp(n,n) exactly bi-invariant and K
/// exactly totally geodesic for the sampled metric.
std::vector<std::pair<Mat, Mat>> unit_translation_symmetry(const GroupId& m);

}  // namespace mobius
