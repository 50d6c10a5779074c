#pragma once

#include <string>
#include <vector>

#include "mobius/linalg.hpp"
#include "mobius/mat.hpp"

namespace mobius {

enum class Kind { Compact, Split };

/// Descriptor of one of the groups in play.
///   Compact: SO_n (R), U_n (C), Sp_n (H).
///   Split:   O_o(n,n) (R), SU(n,n) or U(n,n) (C), Sp(n,n) (H).
/// det_one only matters for complex split groups: true = SU(n,n).
struct GroupId {
    Field field = Field::R;
    int n = 1;
    Kind kind = Kind::Compact;
    bool det_one = true;

    bool operator==(const GroupId&) const = default;
};

inline GroupId compact_group(Field f, int n) { return {f, n, Kind::Compact, true}; }
inline GroupId split_group(Field f, int n, bool det_one = true) { return {f, n, Kind::Split, det_one}; }

/// Matrix size: n for compact, 2n for split.
inline int mat_size(const GroupId& id) { return id.kind == Kind::Compact ? id.n : 2 * id.n; }

/// The compact group M on which the split group G acts.
inline GroupId compact_of(const GroupId& g) { return compact_group(g.field, g.n); }

std::string group_name(const GroupId& id);
GroupId parse_group(const std::string& name);

/// Torus rank of the compact group: floor(n/2) for SO_n, n for U_n / Sp_n.
int rank(const GroupId& id);

/// Real dimension of the Lie algebra (closed form; tests cross-check against
/// the basis constructor).
int lie_dim(const GroupId& id);

/// The signature matrix delta = diag(I_n, -I_n) of b(x,y) = conj(x)^T delta y.
struct FormDelta {
    int n;
    Mat delta;
    explicit FormDelta(Field f, int n_) : n(n_), delta(Mat::zero(f, 2 * n_, 2 * n_)) {
        for (int i = 0; i < n_; ++i) delta.at(i, i) = Quat(1.0);
        for (int i = n_; i < 2 * n_; ++i) delta.at(i, i) = Quat(-1.0);
    }
};

Mat form_delta(Field f, int n);

/// A Lie algebra element attached to its owner group.
struct LieAlgElem {
    GroupId owner;
    Mat value;
};

/// Membership residual.  Compact: ||conj(A)^T A - I||, plus |det - 1| for
/// SO_n.  Split: ||conj(A)^T delta A - delta||, plus |det - 1| for SU(n,n)
/// and the identity-component test (positive determinants of both diagonal
/// blocks) for O_o(n,n).  Residual < 1e-9 counts as membership.
double is_member(const GroupId& id, const Mat& a);

/// Residual of the Lie algebra condition for id (conj(X)^T = -X compact;
/// conj(X)^T delta + delta X = 0 split, plus the trace condition for SU/su).
double lie_residual(const GroupId& id, const Mat& x);

/// Haar sample of a compact group: Gaussian matrix -> Gram-Schmidt with
/// real-positive diagonal normalization (phase-corrected QR); SO_n flips the
/// last column on det = -1.
Mat haar_sample(const GroupId& id, Rng& rng);

/// Torus element D(theta): block rotations for SO_n, diagonal complex phases
/// for U_n and Sp_n.  theta.size() must equal rank(id).
Mat torus_point(const GroupId& id, const std::vector<double>& theta);

/// Weyl density on the torus cube [0,2pi)^rank, normalized so that
///   integral over the cube = haar_mass(id)
/// and for class functions f,
///   integral_M f dmu = integral_cube f(D(theta)) weyl_density(theta) dtheta.
double weyl_density(const GroupId& id, const std::vector<double>& theta);

/// Unnormalized Haar mass: the Riemannian volume of M for the bi-invariant
/// metric induced by frob_inner.  Computed from the sphere-fibration
/// recursions; see README for the table at desk sizes.
double haar_mass(const GroupId& id);

/// The five inclusions between split groups:
///   Oo(n,n) -> SU(n,n)      entry reinterpretation R -> C
///   U(n,n)  -> Sp(n,n)      entry reinterpretation C -> H
///   Oo(n,n) -> Sp(n,n)      entry reinterpretation R -> H
///   U(n,n)  -> Oo(2n,2n)    realification, i |-> J0 blocks
///   Sp(n,n) -> Oo(4n,4n)    realification, q |-> L_q blocks
/// Works for group elements and Lie algebra elements alike.
Mat embed(const GroupId& src, const GroupId& dst, const Mat& a);

/// Real-orthonormal basis (under frob_inner) of the Lie algebra.
std::vector<Mat> lie_basis(const GroupId& id);

/// Random Lie algebra element: Gaussian coefficients over lie_basis, scaled
/// so the result has frob_norm = radius.
Mat random_algebra(const GroupId& id, Rng& rng, double radius = 1.0);

/// Random group element: Haar for compact groups, exp(random_algebra) for
/// split groups (not Haar; test plumbing only).
Mat random_element(const GroupId& id, Rng& rng, double radius = 1.0);

/// The rotation-by-(-pi/2)-in-the-(1,i)-plane matrices A^i (i = 2..n) whose
/// simultaneous centralizer in F^{n x n} is F * I_n.
Mat plane_rotation_generator(Field f, int n, int i);

}  // namespace mobius
