#pragma once

#include <vector>

#include "mobius/scalar.hpp"

namespace mobius {

/// Dense row-major matrix over one of the three scalar fields.  Entries are
/// stored as quaternions; for R and C the padding components stay zero, which
/// the field-specific product kernels rely on.
class Mat {
public:
    Mat() = default;
    Mat(Field f, int rows, int cols)
        : field_(f), rows_(rows), cols_(cols), e_(static_cast<size_t>(rows) * cols) {}

    static Mat identity(Field f, int n) {
        Mat m(f, n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = Quat(1.0);
        return m;
    }
    static Mat zero(Field f, int rows, int cols) { return Mat(f, rows, cols); }

    Field field() const { return field_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    Quat& at(int r, int c) { return e_[static_cast<size_t>(r) * cols_ + c]; }
    const Quat& at(int r, int c) const { return e_[static_cast<size_t>(r) * cols_ + c]; }
    Quat* data() { return e_.data(); }
    const Quat* data() const { return e_.data(); }

    Mat& operator+=(const Mat& o);
    Mat& operator-=(const Mat& o);
    Mat& operator*=(double s);

private:
    Field field_ = Field::R;
    int rows_ = 0, cols_ = 0;
    std::vector<Quat> e_;
};

void check_same_shape(const Mat& a, const Mat& b);
void check_same_field(const Mat& a, const Mat& b);

Mat operator+(Mat a, const Mat& b);
Mat operator-(Mat a, const Mat& b);
Mat operator*(double s, Mat a);

/// C = A * B with field-dispatched inner kernels (the quaternion kernel is the
/// generic one; R and C take reduced-width paths).
Mat matmul(const Mat& a, const Mat& b);
void matmul_into(Mat& dst, const Mat& a, const Mat& b);  // dst preallocated, overwritten

/// Conjugate transpose.  Over H this is the only transpose that anti-commutes
/// with products; the plain transpose does not.
Mat conj_transpose(const Mat& a);
Mat transpose(const Mat& a);
Mat conj_entries(const Mat& a);

/// A^{-1} by Gauss-Jordan elimination with partial pivoting, with strictly
/// sided pivot division so the result is correct over noncommutative scalars.
/// Pivot threshold: 1e-12 * max|entry|.
Mat inverse(const Mat& a);

/// exp(t A) by scaling-and-squaring with a degree-12 Taylor core.
Mat mexp(const Mat& a, double t = 1.0);

/// Re tr(conj(X)^T Y): the real inner product on F^{m x n}.
double frob_inner(const Mat& x, const Mat& y);
double frob_norm(const Mat& x);
double max_abs(const Mat& x);

Mat block(const Mat& a, int r0, int c0, int rows, int cols);
void set_block(Mat& a, int r0, int c0, const Mat& b);
Mat vstack(const Mat& top, const Mat& bottom);
Mat hstack(const Mat& left, const Mat& right);

/// Determinant via elimination; defined here for R and C only (over H use
/// complexify() first).
Scalar det(const Mat& a);

/// H^{n x n} -> C^{2n x 2n}: q = a + j b maps to [[a, -conj(b)], [b, conj(a)]].
Mat complexify(const Mat& a);
/// C^{m x n} -> R^{2m x 2n}: a+bi becomes [[a, -b], [b, a]] blocks.
Mat realify_complex(const Mat& a);
/// H^{m x n} -> R^{4m x 4n}: each entry becomes the matrix of left
/// multiplication on H = R^4 in the basis {1, i, j, k}.
Mat realify_quaternionic(const Mat& a);
/// Retag R -> C or R/C -> H (entries unchanged; padding already zero).
Mat retag(const Mat& a, Field to);

}  // namespace mobius
