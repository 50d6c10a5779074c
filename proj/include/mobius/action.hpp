#pragma once

#include "mobius/groups.hpp"

namespace mobius {

/// An element of a split group with block access, validated on construction.
struct MobiusElement {
    GroupId group;
    Mat m;

    MobiusElement(const GroupId& g, Mat full, bool validate = true);
    static MobiusElement identity(const GroupId& g);

    int n() const { return group.n; }
    Mat blockA() const { return block(m, 0, 0, group.n, group.n); }
    Mat blockB() const { return block(m, 0, group.n, group.n, group.n); }
    Mat blockC() const { return block(m, group.n, 0, group.n, group.n); }
    Mat blockD() const { return block(m, group.n, group.n, group.n, group.n); }
};

/// The Mobius action g * U = (AU + B)(CU + D)^{-1}.
Mat act(const MobiusElement& g, const Mat& u);

/// Same map through the isotropic-subspace picture: apply g to a (twisted)
/// basis of {(Ux, x)} and re-solve for U'.  Independent oracle for act.
/// basis_twist defaults to a fixed well-conditioned non-identity matrix.
Mat act_on_graph(const MobiusElement& g, const Mat& u);
Mat act_on_graph(const MobiusElement& g, const Mat& u, const Mat& basis_twist);

/// The quadratic vector field on M induced by Z in Lie(G):
///   W_Z(p) = Z11 p + Z12 - p Z21 p - p Z22.
/// This is d/dt|_0 exp(tZ) * p.  No validation; hot path.
Mat algebra_field(const GroupId& g, const Mat& z, const Mat& p);

/// d/dt|_0 (curve through g with velocity X) * q, where X is stored
/// extrinsically with X g^{-1} in Lie(G).  Validates tangency of X and
/// membership of q, then evaluates analytically via algebra_field.
Mat induced_field(const MobiusElement& g, const Mat& x, const Mat& q);

/// The boost curve gamma(t) = exp(t (0 I; I 0)) and its tanh reparametrization
/// sigma(s) = (1-s^2)^{-1/2} (I sI; sI I), s in (-1, 1).
Mat boost_gamma(const GroupId& g, double t);
Mat boost_sigma(const GroupId& g, double s);
/// d sigma / ds as an extrinsic tangent matrix at sigma(s).
Mat boost_sigma_velocity(const GroupId& g, double s);

/// det(q + eps I) as a nonnegativity test for "q has no eigenvalue -eps";
/// quaternionic matrices go through the complex 2n x 2n representation.
double eig_margin(const Mat& q, double eps);

}  // namespace mobius
