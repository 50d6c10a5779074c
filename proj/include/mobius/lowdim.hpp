#pragma once

#include <array>
#include <complex>

#include "mobius/geodesic.hpp"

namespace mobius {

/// Split quaternion a 1 + b i + c j + d k realized as the 2x2 real matrix
/// algebra with the determinant quadratic form: -i^2 = j^2 = k^2 = 1,
/// ij = -ji = k, square norm a^2 + b^2 - c^2 - d^2 = det of the matrix form.
struct SplitQuat {
    double a = 0, b = 0, c = 0, d = 0;

    SplitQuat() = default;
    SplitQuat(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {}
    /// From alpha + j beta with alpha, beta complex.
    static SplitQuat from_pair(std::complex<double> alpha, std::complex<double> beta);
};

SplitQuat smul(const SplitQuat& p, const SplitQuat& q);
SplitQuat sconj(const SplitQuat& p);          // a - bi - cj - dk
double snormsq(const SplitQuat& p);           // a^2 + b^2 - c^2 - d^2
SplitQuat sadd(const SplitQuat& p, const SplitQuat& q);
SplitQuat sneg(const SplitQuat& p);
Mat to_mat2(const SplitQuat& p);              // 2x2 real matrix form
SplitQuat from_mat2(const Mat& m);

/// Random SL2(R) element as a split quaternion (exp of a random traceless
/// 2x2 matrix).
SplitQuat random_sl2(Rng& rng, double radius = 0.8);

/// 4x4 real matrix of L_p R_{conj(q)} on M in the ordered basis {1, i, j, -k}
/// (the identification O_o(M) = O_o(2,2)).
Mat o22_operator(const SplitQuat& p, const SplitQuat& q);

/// The Mobius action of O_o(2,2) on SO_2 = S^1 through the subspace
/// {u z + j z}: returns u' and the C-linearity consistency residual of the
/// image subspace.
struct CircleImage {
    std::complex<double> u;
    double consistency;
};
CircleImage o22_act(const SplitQuat& p, const SplitQuat& q, std::complex<double> u);

/// The conformal-motion side of the O22 diagram: p . u = (alpha u + conj(beta))
/// (beta u + conj(alpha))^{-1} for p = alpha + j beta.
std::complex<double> o22_direct(const SplitQuat& p, std::complex<double> u);

/// Conformal action of O_o(1, m+1) on S^m: A (1, z)^T ~ (1, z').
std::vector<double> conformal_act(const Mat& a, const std::vector<double>& z);

/// Projective action of SL_{m+1}(R) on S^m: z -> Az / |Az|.
std::vector<double> projective_act(const Mat& a, const std::vector<double>& z);

/// Membership residual in O_o(1, k): A^T eta A = eta with eta = diag(1, -I_k),
/// det A = 1 and A_00 >= 1.
double lorentz_residual(const Mat& a, int k);

/// 4x4 real matrices of left / right quaternion multiplication on H = R^4
/// in basis {1, i, j, k}.
Mat mat4_left(const Quat& q);
Mat mat4_right(const Quat& q);

/// Lie algebra map f: sp(1,1) -> o(1,4),
///   f((xi conj(alpha); alpha eta)) = (0 2 alpha^T; 2 alpha L_eta - R_xi).
Mat sp11_algebra_map(const Mat& x);

/// Group morphism F: Sp(1,1) -> O_o(1,4) integrating f, computed through the
/// polar decomposition g = u h and closed forms for both factors.
Mat sp11_morphism(const Mat& g);

/// Group morphism F: SL_4(R) -> O_o(3,3): Phi(A) Z = A Z A^T on o_4 expressed
/// in the (3,3)-orthonormal basis {L_i, L_j, L_k, R_i, R_j, R_k}.
Mat sl4_morphism(const Mat& a);

/// Matrix of L_w R_w^{-1} on Im(H) in basis {i, j, k}, by the closed
/// entrywise formula.
Mat rotation_matrix_Iw(const Quat& w);
/// Same operator computed directly from quaternion products (test oracle).
Mat rotation_matrix_Iw_direct(const Quat& w);

enum class Diagram { O22, Sp11, SL4 };

struct DiagramReport {
    Diagram which;
    long samples = 0;
    double max_residual = 0.0;
    double aux_residual = 0.0;  // O22: triviality of the right factor
    bool pass = false;
};

/// Compares the two paths around the equivalence square on random elements.
DiagramReport diagram_check(Diagram which, long samples, uint64_t seed);

/// Corollary-7 style defect: integrates the ambient kinetic-metric geodesic
/// from the identity with velocity Z built from (xi, eta) and returns the max
/// deviation from exp(tZ).
///   Sp(1,1): Z = diag(xi, eta) in sp_1 + sp_1 (imaginary quaternions).
///   Oo(3,3): Z = diag(A_xi, A_eta), A_xi = matrix of v -> xi v - v xi on Im H.
double corollary7_defect_sp11(const Quat& xi, const Quat& eta, double total_time, double dt,
                              const QuadratureSpec& spec);
double corollary7_defect_o33(const Quat& xi, const Quat& eta, double total_time, double dt,
                             const QuadratureSpec& spec);

}  // namespace mobius
